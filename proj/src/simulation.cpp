#include "quantfusion/simulation.hpp"

#include "quantfusion/calendar.hpp"
#include "quantfusion/errors.hpp"
#include "quantfusion/preprocess.hpp"
#include "quantfusion/rng.hpp"

#include <algorithm>
#include <map>

namespace qf {

namespace {

// Seed streams so the picker and regime draws stay independent of each
// other and of any synthetic data generated from the same master seed.
constexpr std::uint64_t kPickerStream = 2;
constexpr std::uint64_t kRegimeStream = 3;

int month_key(const Date& d) { return d.year * 12 + (d.month - 1); }

BarSeries slice_bars(const BarSeries& series, const Date& begin, const Date& end) {
    BarSeries out;
    out.id = series.id;
    for (const auto& bar : series.bars)
        if (!(bar.date < begin) && !(end < bar.date)) out.bars.push_back(bar);
    return out;
}

const Bar* bar_on(const BarSeries& series, const Date& d) {
    auto it = std::lower_bound(series.bars.begin(), series.bars.end(), d,
                               [](const Bar& b, const Date& day) { return b.date < day; });
    if (it == series.bars.end() || !(it->date == d)) return nullptr;
    return &*it;
}

const Bar* bar_at_or_before(const BarSeries& series, const Date& d) {
    auto it = std::upper_bound(series.bars.begin(), series.bars.end(), d,
                               [](const Date& day, const Bar& b) { return day < b.date; });
    if (it == series.bars.begin()) return nullptr;
    return &*(it - 1);
}

} // namespace

void BacktestConfig::validate() const {
    trade.validate();
    shape.validate();
    swarm.validate();
    regime.validate();
    if (factor_count < shape.k)
        throw ValidationError("factor_count must cover the network's input width");
    if (!(sim_range.begin < sim_range.end))
        throw ValidationError("sim_range must span at least two days");
}

DateRange default_sim_range(const BarSeries& index, const TradeParams& params) {
    if (index.bars.empty()) throw EmptyPanelError("index series is empty");
    Date target = add_months(index.bars.front().date, params.regime_train_window_months);
    auto it = std::lower_bound(index.bars.begin(), index.bars.end(), target,
                               [](const Bar& b, const Date& d) { return b.date < d; });
    if (it == index.bars.end())
        throw InsufficientDataError("index history is shorter than the regime window");
    return DateRange{it->date, index.bars.back().date};
}

BacktestResult run_backtest(const SimulationData& data, const BacktestConfig& config) {
    config.validate();
    if (data.index.bars.empty()) throw EmptyPanelError("index series is empty");
    if (data.stocks.empty()) throw EmptyPanelError("no stock series given");

    BacktestResult result;

    FactorPanel panel;
    if (data.factors.stage == PanelStage::raw) {
        panel = preprocess_panel(data.factors, &result.warnings);
    } else if (data.factors.stage == PanelStage::standardized) {
        panel = data.factors;
    } else {
        throw StageError("backtest needs a raw or standardized panel, got " +
                         std::string(stage_name(data.factors.stage)));
    }

    std::vector<Date> trading_days;
    trading_days.reserve(data.index.bars.size());
    for (const auto& bar : data.index.bars) trading_days.push_back(bar.date);
    TradingCalendar cal(std::move(trading_days));
    const auto& days = cal.days();

    auto b_it = std::lower_bound(days.begin(), days.end(), config.sim_range.begin);
    auto e_it = std::upper_bound(days.begin(), days.end(), config.sim_range.end);
    std::size_t b = static_cast<std::size_t>(b_it - days.begin());
    std::size_t e = static_cast<std::size_t>(e_it - days.begin());
    if (e - b < 2)
        throw InsufficientDataError("sim_range must cover at least two trading days");

    const bool use_regime = config.timing_override == TimingOverride::none;
    const bool use_picker = config.timing_override != TimingOverride::force_flat;

    if (use_regime &&
        add_months(days[b], -config.trade.regime_train_window_months) <
            data.index.bars.front().date)
        throw InsufficientDataError(
            "history before sim_range is shorter than the regime training window");
    if (use_picker && b < static_cast<std::size_t>(config.trade.picker_train_window) + 1)
        throw InsufficientDataError(
            "history before sim_range is shorter than the picker training window");

    std::map<std::string, const BarSeries*> by_id;
    for (const auto& s : data.stocks) by_id[s.id] = &s;

    Portfolio portfolio(config.trade.initial_capital);
    PickerModel picker;
    RegimeModel regime;
    bool trained = false;
    int last_train_month = 0;
    int retrain_count = 0;
    std::vector<std::string> candidates;
    bool have_picks = false;
    std::size_t last_pick = 0;
    bool long_signal = false;
    bool have_signal = false;
    std::size_t last_signal = 0;
    int cur_state = -1;
    int cur_rank = 0;
    const double bench_base = data.index.bars[b].close;

    auto sell_at_open = [&](const Date& today, const std::string& id) {
        auto sit = by_id.find(id);
        const Bar* bar = sit == by_id.end() ? nullptr : bar_on(*sit->second, today);
        if (bar == nullptr) {
            result.warnings.push_back("no bar for " + id + " on " + today.to_string() +
                                      "; position held");
            return;
        }
        portfolio.sell(today, id, bar->open, config.trade);
    };

    for (std::size_t i = b; i < e; ++i) {
        const Date& today = days[i];

        // Monthly retraining, including the inception day. Both windows
        // end strictly before today, so no decision sees today's prices.
        bool need_train =
            (use_picker || use_regime) &&
            (!trained || (cal.is_month_start(i) &&
                          month_key(today) - last_train_month >=
                              config.trade.training_cycle_months));
        if (need_train) {
            if (use_picker) {
                std::size_t w = static_cast<std::size_t>(config.trade.picker_train_window);
                DateRange picker_range{days[i - w - 1], days[i - 2]};
                SwarmConfig swarm = config.swarm;
                swarm.seed = derive_seed(derive_seed(config.seed, kPickerStream),
                                         static_cast<std::uint64_t>(retrain_count));
                picker = train_picker(panel, data.stocks, data.index, picker_range,
                                      config.factor_count, config.shape, swarm,
                                      config.ic_mode);
            }
            if (use_regime) {
                BaumWelchConfig bw = config.regime;
                bw.seed = derive_seed(derive_seed(config.seed, kRegimeStream),
                                      static_cast<std::uint64_t>(retrain_count));
                DateRange window{
                    add_months(today, -config.trade.regime_train_window_months),
                    days[i - 1]};
                regime = train_regime(data.index, window, bw, &result.warnings);
            }
            trained = true;
            last_train_month = month_key(today);
            ++retrain_count;
        }

        // Decode yesterday's market state on the timing cycle.
        if (use_regime) {
            if (!have_signal ||
                i - last_signal >= static_cast<std::size_t>(config.trade.timing_cycle)) {
                Date wbegin = add_months(today, -config.trade.regime_train_window_months);
                BarSeries trail = slice_bars(data.index, wbegin, days[i - 1]);
                DecodedPath path = decode_states(regime, trail);
                cur_state = path.states.back();
                cur_rank = regime.ranking.ranks[static_cast<std::size_t>(cur_state)];
                long_signal = timing_signal(regime.ranking, cur_state);
                have_signal = true;
                last_signal = i;
            }
        } else {
            long_signal = config.timing_override == TimingOverride::force_long;
        }
        result.days.push_back({today, cur_state, cur_rank, long_signal});

        // The inception day only establishes the baseline equity point.
        if (i > b) {
            if (use_picker &&
                (!have_picks ||
                 i - last_pick >= static_cast<std::size_t>(config.trade.picking_cycle))) {
                auto rows = prediction_rows(panel, days[i - 1], picker);
                if (rows.empty()) {
                    result.warnings.push_back("no factor rows on " +
                                              days[i - 1].to_string() +
                                              "; keeping previous candidates");
                } else {
                    PickResult pick = predict_and_pick(picker.params, picker.shape, rows,
                                                       config.trade.n_pick);
                    candidates = pick.picks;
                    if (pick.short_of_candidates)
                        result.warnings.push_back("fewer candidates than n_pick on " +
                                                  today.to_string());
                }
                have_picks = true;
                last_pick = i;
            }

            if (!long_signal) {
                std::vector<std::string> held;
                for (const auto& [id, shares] : portfolio.positions()) held.push_back(id);
                for (const auto& id : held) sell_at_open(today, id);
            } else {
                std::vector<std::string> leavers;
                for (const auto& [id, shares] : portfolio.positions())
                    if (std::find(candidates.begin(), candidates.end(), id) ==
                        candidates.end())
                        leavers.push_back(id);
                for (const auto& id : leavers) sell_at_open(today, id);

                for (const auto& id : candidates) {
                    if (portfolio.position(id) > 0.0) continue;
                    auto sit = by_id.find(id);
                    const Bar* bar = sit == by_id.end() ? nullptr : bar_on(*sit->second, today);
                    if (bar == nullptr) {
                        result.warnings.push_back("no bar for " + id + " on " +
                                                  today.to_string() + "; buy skipped");
                        continue;
                    }
                    double budget = config.trade.buy_fraction * portfolio.cash();
                    portfolio.buy(today, id, bar->open, budget, config.trade);
                }
            }
        }

        std::map<std::string, double> closes;
        for (const auto& [id, shares] : portfolio.positions()) {
            const Bar* bar = bar_at_or_before(*by_id.at(id), today);
            if (bar == nullptr)
                throw DomainError("no close history to mark " + id);
            closes[id] = bar->close;
        }
        double equity = portfolio.equity(closes);
        double bench =
            config.trade.initial_capital * (data.index.bars[i].close / bench_base);
        result.curve.push_back({today, equity, bench});
    }

    result.fills = portfolio.fills();
    result.metrics = compute_metrics(result.curve, result.fills, config.risk_free_rate);
    return result;
}

} // namespace qf
