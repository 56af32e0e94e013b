#include "quantfusion/ic.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"
#include "quantfusion/stats.hpp"

#include <algorithm>
#include <map>

namespace qf {

namespace {

// Pearson that tolerates a constant x by reporting 0. A standardized factor
// can still be globally constant when every cross-section hit the zero
// stdev rule, and a ranking tool should rank that last, not abort.
double correlation_or_zero(const std::vector<double>& x, const std::vector<double>& y) {
    const double sx = sample_stdev(x);
    const double sy = sample_stdev(y);
    if (sx == 0.0) return 0.0;
    if (sy == 0.0) {
        throw DomainError("ic: return series has zero variance");
    }
    return sample_covariance(x, y) / (sx * sy);
}

ICReport rank_and_select(std::vector<ICEntry> entries, int top_k) {
    if (top_k < 1) throw DomainError("ic: top_k must be >= 1");
    std::sort(entries.begin(), entries.end(), [](const ICEntry& a, const ICEntry& b) {
        const double ma = std::abs(a.ic);
        const double mb = std::abs(b.ic);
        if (ma != mb) return ma > mb;
        return a.factor < b.factor;
    });
    ICReport report;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<int>(i) + 1;
        entries[i].selected = entries[i].rank <= top_k;
        if (entries[i].selected) report.selected.push_back(entries[i].factor);
    }
    report.entries = std::move(entries);
    return report;
}

} // namespace

DatedSeries index_simple_returns(const BarSeries& index_bars) {
    DatedSeries out;
    const auto& bars = index_bars.bars;
    for (std::size_t t = 1; t < bars.size(); ++t) {
        out.dates.push_back(bars[t].date);
        out.values.push_back(bars[t].close / bars[t - 1].close - 1.0);
    }
    return out;
}

ICReport compute_ic(const FactorPanel& panel, const DatedSeries& index_returns,
                    int top_k) {
    require_stage(panel, PanelStage::standardized, "compute_ic");

    // Next-day return for each panel date: the first return dated strictly
    // after it. The return series is ascending by construction.
    auto next_return = [&index_returns](const Date& d) -> const double* {
        auto it = std::upper_bound(index_returns.dates.begin(),
                                   index_returns.dates.end(), d);
        if (it == index_returns.dates.end()) return nullptr;
        const auto idx = static_cast<std::size_t>(it - index_returns.dates.begin());
        return &index_returns.values[idx];
    };

    const std::size_t nf = panel.factor_names.size();
    std::vector<std::vector<double>> xs(nf);
    std::vector<double> ys;
    for (const PanelRow& row : panel.rows) {
        const double* r = next_return(row.date);
        if (!r) continue;
        ys.push_back(*r);
        for (std::size_t f = 0; f < nf; ++f) xs[f].push_back(*row.values[f]);
    }
    if (ys.size() < 3) {
        throw InsufficientDataError("ic: need at least 3 paired observations, got " +
                                    std::to_string(ys.size()));
    }

    std::vector<ICEntry> entries(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        entries[f].factor = panel.factor_names[f];
        entries[f].ic = correlation_or_zero(xs[f], ys);
    }
    return rank_and_select(std::move(entries), top_k);
}

ICReport compute_ic_per_stock(const FactorPanel& panel,
                              const std::vector<BarSeries>& stocks, int top_k) {
    require_stage(panel, PanelStage::standardized, "compute_ic");

    // next-day simple return per stock, keyed by (stock, date-serial)
    std::map<std::string, DatedSeries> returns;
    for (const BarSeries& s : stocks) returns[s.id] = index_simple_returns(s);

    const std::size_t nf = panel.factor_names.size();
    std::vector<std::vector<double>> xs(nf);
    std::vector<double> ys;
    for (const PanelRow& row : panel.rows) {
        const auto it = returns.find(row.stock_id);
        if (it == returns.end()) continue;
        const DatedSeries& series = it->second;
        auto pos = std::upper_bound(series.dates.begin(), series.dates.end(), row.date);
        if (pos == series.dates.end()) continue;
        ys.push_back(series.values[static_cast<std::size_t>(pos - series.dates.begin())]);
        for (std::size_t f = 0; f < nf; ++f) xs[f].push_back(*row.values[f]);
    }
    if (ys.size() < 3) {
        throw InsufficientDataError("ic: need at least 3 paired observations, got " +
                                    std::to_string(ys.size()));
    }

    std::vector<ICEntry> entries(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        entries[f].factor = panel.factor_names[f];
        entries[f].ic = correlation_or_zero(xs[f], ys);
    }
    return rank_and_select(std::move(entries), top_k);
}

void write_ic_report(const std::string& path, const ICReport& report) {
    CsvTable table;
    table.header = {"factor", "ic", "rank", "selected"};
    for (const ICEntry& e : report.entries) {
        table.rows.push_back({e.factor, format_number(e.ic), std::to_string(e.rank),
                              e.selected ? "1" : "0"});
    }
    write_csv(path, table);
}

} // namespace qf
