#pragma once

#include "quantfusion/date.hpp"

#include <string>
#include <vector>

namespace qf {

/// Per-state totals of next-trade-day returns over a decoded path,
/// with 1-based ranks (1 = largest total) and the top-two state set.
struct StateRanking {
    std::vector<double> totals; // per state
    std::vector<int> ranks;     // per state, permutation of 1..N
    std::vector<int> top_two;   // state indices holding ranks 1 and 2

    bool operator==(const StateRanking&) const = default;
};

/// Sums aligned next-day returns by state. returns[t] must be the index
/// return on the trading day after path[t]'s day. States that never
/// appear in the path keep total 0 and rank below every visited state
/// with a nonzero total; remaining ties break by state index.
StateRanking rank_states(const std::vector<int>& path, const std::vector<double>& returns,
                         int num_states);

/// True (long) when the state holds rank 1 or 2.
bool timing_signal(const StateRanking& ranking, int current_state);

/// Writes `date,state,rank,signal` rows, signal as 1 (long) / 0 (flat).
void write_state_path(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<int>& states, const StateRanking& ranking);

} // namespace qf
