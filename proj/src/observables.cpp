#include "quantfusion/observables.hpp"

#include "quantfusion/errors.hpp"

#include <cmath>

namespace qf {

double ObservationRow::component(int i) const {
    switch (i) {
        case 0: return lgrfsb;
        case 1: return tv;
        case 2: return dlshlp;
        case 3: return dlr;
        case 4: return fdlr;
        default: throw DimensionError("observation component index out of range");
    }
}

std::vector<std::vector<double>> ObservationSeries::matrix() const {
    std::vector<std::vector<double>> m;
    m.reserve(rows.size());
    for (const auto& r : rows) {
        m.push_back({r.lgrfsb, r.tv, r.dlshlp, r.dlr, r.fdlr});
    }
    return m;
}

ObservationSeries compute_observables(const BarSeries& index_bars) {
    const auto& bars = index_bars.bars;
    if (bars.size() < 6) {
        throw InsufficientDataError("need at least 6 index bars, got " +
                                    std::to_string(bars.size()));
    }
    for (const Bar& b : bars) {
        if (b.close <= 0 || b.high <= 0 || b.low <= 0 || b.fsb <= 0) {
            throw DomainError("nonpositive price or fsb at " + b.date.to_string());
        }
    }

    ObservationSeries out;
    out.dates.reserve(bars.size() - 5);
    out.rows.reserve(bars.size() - 5);
    for (std::size_t t = 5; t < bars.size(); ++t) {
        ObservationRow row;
        row.lgrfsb = std::log(bars[t].fsb / bars[t - 1].fsb);
        row.tv = bars[t].volume;
        row.dlshlp = std::log(bars[t].high / bars[t].low);
        row.dlr = std::log(bars[t].close / bars[t - 1].close);
        row.fdlr = std::log(bars[t].close / bars[t - 5].close);
        if (!std::isfinite(row.lgrfsb) || !std::isfinite(row.tv) ||
            !std::isfinite(row.dlshlp) || !std::isfinite(row.dlr) ||
            !std::isfinite(row.fdlr)) {
            throw DomainError("non-finite observable at " + bars[t].date.to_string());
        }
        out.dates.push_back(bars[t].date);
        out.rows.push_back(row);
    }
    return out;
}

} // namespace qf
