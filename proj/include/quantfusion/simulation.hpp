#pragma once

#include "quantfusion/bars.hpp"
#include "quantfusion/hmm.hpp"
#include "quantfusion/hyper.hpp"
#include "quantfusion/metrics.hpp"
#include "quantfusion/panel.hpp"
#include "quantfusion/portfolio.hpp"
#include "quantfusion/regime.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qf {

struct SimulationData {
    BarSeries index;
    std::vector<BarSeries> stocks;
    FactorPanel factors; // raw panels are preprocessed on entry
};

// Diagnostic override for the timing stance. force_flat never enters the
// market (a dry run of the accounting loop); force_long stays invested
// regardless of the market state. Both skip regime training entirely.
enum class TimingOverride { none, force_flat, force_long };

struct BacktestConfig {
    TradeParams trade;
    NetworkShape shape;
    SwarmConfig swarm;
    BaumWelchConfig regime;
    int factor_count = 6;
    ICMode ic_mode = ICMode::stock_next_day;
    TimingOverride timing_override = TimingOverride::none;
    double risk_free_rate = 0.03; // annual, for the summary metrics
    std::uint64_t seed = 0;
    DateRange sim_range; // inclusive; trading starts the day after begin

    void validate() const;
};

/// Per-day decision context: the state decoded for the previous close,
/// its rank under the model current that day, and the resulting stance.
/// Overridden runs carry state -1 and rank 0.
struct DailyRecord {
    Date date;
    int state = -1;
    int state_rank = 0;
    bool long_signal = false;

    bool operator==(const DailyRecord&) const = default;
};

struct BacktestResult {
    EquityCurve curve;
    std::vector<Fill> fills;
    std::vector<DailyRecord> days;
    MetricsReport metrics;
    std::vector<std::string> warnings;
};

/// First range whose every day has a full training history behind it:
/// begins one regime window past the first bar, ends at the last bar.
DateRange default_sim_range(const BarSeries& index, const TradeParams& params);

/// Runs the fusion strategy day by day over sim_range. The first day is
/// the inception point (equity exactly at initial capital, no trades);
/// models retrain on month boundaries, candidates refresh on the picking
/// cycle, the stance updates on the timing cycle, and orders execute at
/// the open with slippage and fees. Deterministic for a fixed config.
BacktestResult run_backtest(const SimulationData& data, const BacktestConfig& config);

} // namespace qf
