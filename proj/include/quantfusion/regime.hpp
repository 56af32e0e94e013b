#pragma once

#include "quantfusion/bars.hpp"
#include "quantfusion/boxcox.hpp"
#include "quantfusion/hmm.hpp"
#include "quantfusion/hyper.hpp"
#include "quantfusion/ranking.hpp"

#include <string>
#include <vector>

namespace qf {

/// Market-state model: the observable normalization fitted on the
/// training window, the emission/transition parameters, and the
/// return-based state ranking frozen at training time.
struct RegimeModel {
    BoxCoxTransform transform;
    MGHMMParams params;
    StateRanking ranking;

    bool operator==(const RegimeModel&) const = default;
};

/// Fits the full market-state pipeline on the index bars inside
/// `window`: derive observables, fit and apply the normalization, run
/// EM, decode the window, and rank states by total next-day return.
/// The decoded last observation has no next-day return inside the
/// window, so ranking uses all but the final path entry.
RegimeModel train_regime(const BarSeries& index, const DateRange& window,
                         const BaumWelchConfig& config,
                         std::vector<std::string>* warnings = nullptr);

/// Decodes the state path for every observation derivable from `bars`
/// (their dates start at the sixth bar) under a trained model.
struct DecodedPath {
    std::vector<Date> dates;
    std::vector<int> states;
};

DecodedPath decode_states(const RegimeModel& model, const BarSeries& bars);

void save_regime_model(const std::string& path, const RegimeModel& model);
RegimeModel load_regime_model(const std::string& path);

} // namespace qf
