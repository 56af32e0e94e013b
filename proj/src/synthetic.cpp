#include "quantfusion/synthetic.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/rng.hpp"

#include <cmath>
#include <cstdio>

namespace qf {

namespace {

int weekday(const Date& d) {
    // 0 = Sunday .. 6 = Saturday; 1970-01-01 was a Thursday.
    std::int64_t w = (d.serial() + 4) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

std::vector<Date> weekday_calendar(Date start, int count) {
    std::vector<Date> days;
    days.reserve(static_cast<std::size_t>(count));
    Date d = start;
    while (static_cast<int>(days.size()) < count) {
        const int w = weekday(d);
        if (w != 0 && w != 6) days.push_back(d);
        d = add_days(d, 1);
    }
    return days;
}

void validate(const SyntheticSpec& spec) {
    if (spec.regimes.empty()) throw DomainError("synthetic spec needs at least one regime");
    for (const RegimeSpec& r : spec.regimes) {
        if (r.vol < 0) throw DomainError("regime volatility must be nonnegative");
        if (r.mean_duration < 1) throw DomainError("regime mean duration must be >= 1");
    }
    if (spec.num_stocks < 1 || spec.num_days < 1 || spec.num_factors < 1) {
        throw DomainError("synthetic counts must be >= 1");
    }
    if (spec.num_signal_factors < 0 || spec.num_signal_factors > spec.num_factors) {
        throw DomainError("num_signal_factors out of range");
    }
    if (spec.idio_vol < 0) throw DomainError("idio_vol must be nonnegative");
    if (spec.null_rate < 0 || spec.null_rate >= 1) {
        throw DomainError("null_rate must lie in [0, 1)");
    }
    if (spec.num_industries < 1) throw DomainError("num_industries must be >= 1");
}

// Builds a plausible bar around a close-to-close move. All intraday spread
// is proportional to scale, so scale 0 yields a flat bar and the OHLC
// bounds hold by construction.
Bar make_bar(Date date, double prev_close, double close, double scale, Rng& rng) {
    Bar bar;
    bar.date = date;
    bar.close = close;
    bar.open = prev_close * std::exp(scale * 0.3 * rng.normal());
    const double hi_pad = std::abs(rng.normal()) * scale * 0.5;
    const double lo_pad = std::abs(rng.normal()) * scale * 0.5;
    bar.high = std::max(bar.open, bar.close) * std::exp(hi_pad);
    bar.low = std::min(bar.open, bar.close) * std::exp(-lo_pad);
    return bar;
}

} // namespace

SyntheticMarket generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const int n_regimes = static_cast<int>(spec.regimes.size());
    const std::vector<Date> days = weekday_calendar(spec.start_date, spec.num_days);

    SyntheticMarket out;

    // Regime chain with geometric holding times.
    out.true_regimes.resize(static_cast<std::size_t>(spec.num_days));
    int state = 0;
    for (int t = 0; t < spec.num_days; ++t) {
        out.true_regimes[static_cast<std::size_t>(t)] = state;
        const double stay = 1.0 - 1.0 / spec.regimes[static_cast<std::size_t>(state)].mean_duration;
        if (n_regimes > 1 && rng.uniform() >= stay) {
            int hop = static_cast<int>(rng.integer(static_cast<std::uint64_t>(n_regimes - 1)));
            state = hop >= state ? hop + 1 : hop;
        }
    }

    // Index bars. Volume level and financing balance growth both depend on
    // the regime so every observable carries state information.
    std::vector<double> index_logret(static_cast<std::size_t>(spec.num_days));
    {
        out.index.id = "index";
        double close = 1000.0;
        double fsb = 5e9;
        for (int t = 0; t < spec.num_days; ++t) {
            const RegimeSpec& reg = spec.regimes[static_cast<std::size_t>(out.true_regimes[static_cast<std::size_t>(t)])];
            const double r = reg.drift + reg.vol * rng.normal();
            index_logret[static_cast<std::size_t>(t)] = r;
            const double prev_close = close;
            close *= std::exp(r);
            Bar bar = make_bar(days[static_cast<std::size_t>(t)], prev_close, close, reg.vol, rng);
            bar.volume = 1e8 * std::exp(10.0 * reg.drift + 5.0 * reg.vol + 0.1 * rng.normal());
            fsb *= std::exp(0.5 * reg.drift + 0.2 * reg.vol * rng.normal());
            bar.fsb = fsb;
            out.index.bars.push_back(bar);
        }
        validate_series(out.index, /*require_fsb=*/true);
    }

    // Stocks: regime drift plus idiosyncratic noise.
    std::vector<std::vector<double>> stock_logret(
        static_cast<std::size_t>(spec.num_stocks),
        std::vector<double>(static_cast<std::size_t>(spec.num_days)));
    std::vector<double> mktcap(static_cast<std::size_t>(spec.num_stocks));
    for (int s = 0; s < spec.num_stocks; ++s) {
        BarSeries series;
        char id[16];
        std::snprintf(id, sizeof(id), "S%03d", s);
        series.id = id;
        mktcap[static_cast<std::size_t>(s)] = std::exp(rng.normal(std::log(5e9), 0.8));
        double close = 10.0 * std::exp(rng.normal(0.0, 0.5));
        for (int t = 0; t < spec.num_days; ++t) {
            const RegimeSpec& reg = spec.regimes[static_cast<std::size_t>(out.true_regimes[static_cast<std::size_t>(t)])];
            const double r = reg.drift + spec.idio_vol * rng.normal();
            stock_logret[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = r;
            const double prev_close = close;
            close *= std::exp(r);
            Bar bar = make_bar(days[static_cast<std::size_t>(t)], prev_close, close,
                               std::max(reg.vol, spec.idio_vol), rng);
            bar.volume = 1e6 * std::exp(0.3 * rng.normal());
            series.bars.push_back(bar);
        }
        validate_series(series, /*require_fsb=*/false);
        out.stocks.push_back(std::move(series));
    }

    // Factor panel. Signal columns lead on the next-day stock return; the
    // last day has no future return and gets pure noise there too.
    out.factors.stage = PanelStage::raw;
    for (int f = 0; f < spec.num_factors; ++f) {
        char name[16];
        std::snprintf(name, sizeof(name), "f%02d", f + 1);
        out.factors.factor_names.emplace_back(name);
    }
    const double idio = spec.idio_vol > 0 ? spec.idio_vol : 1.0;
    for (int t = 0; t < spec.num_days; ++t) {
        for (int s = 0; s < spec.num_stocks; ++s) {
            PanelRow row;
            row.date = days[static_cast<std::size_t>(t)];
            row.stock_id = out.stocks[static_cast<std::size_t>(s)].id;
            row.mktcap = mktcap[static_cast<std::size_t>(s)];
            char ind[16];
            std::snprintf(ind, sizeof(ind), "IND%d", s % spec.num_industries);
            row.industry = ind;
            for (int f = 0; f < spec.num_factors; ++f) {
                double value = rng.normal();
                if (f < spec.num_signal_factors && t + 1 < spec.num_days) {
                    const double fwd = stock_logret[static_cast<std::size_t>(s)][static_cast<std::size_t>(t) + 1];
                    value += spec.signal_strength * fwd / idio;
                }
                const bool null_cell = spec.null_rate > 0 && rng.uniform() < spec.null_rate;
                row.values.emplace_back(null_cell ? std::optional<double>{}
                                                  : std::optional<double>{value});
            }
            out.factors.rows.push_back(std::move(row));
        }
    }

    return out;
}

} // namespace qf
