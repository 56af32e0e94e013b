#pragma once

#include "quantfusion/config.hpp"
#include "quantfusion/simulation.hpp"

#include <string>
#include <vector>

namespace qf {

/// Loads the configured market data files, or generates the synthetic
/// market in memory when no paths are set. The synthetic fallback uses
/// the same derived seed as cmd_synth, so generated files and the
/// in-memory market agree.
SimulationData load_market(const RunConfig& config);

// Each command writes its artifacts under config.out_dir (created on
// demand), reports data-quality warnings on stderr, and throws the
// module error types on failure; exit-code mapping lives in the C API.

/// index.csv, stocks.csv, factors.csv, true_regimes.csv
void cmd_synth(const RunConfig& config);

/// factors_standardized.csv
void cmd_preprocess(const RunConfig& config);

/// ic_report.csv
void cmd_ic(const RunConfig& config);

/// picker_model.json
void cmd_train_picker(const RunConfig& config);

/// regime_model.json, regime_states.csv
void cmd_train_regime(const RunConfig& config);

/// equity.csv, fills.csv, metrics.json, equity.svg
void cmd_backtest(const RunConfig& config);

/// report.csv, report.txt: one column per metrics file, rows per
/// (period, metric) pair, absent values rendered as n/a.
void cmd_report(const std::vector<std::string>& metrics_paths, const std::string& out_dir);

} // namespace qf
