#include "quantfusion/ranking.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qf {

StateRanking rank_states(const std::vector<int>& path, const std::vector<double>& returns,
                         int num_states) {
    if (num_states < 1) throw DomainError("rank_states: num_states must be >= 1");
    if (path.size() != returns.size()) {
        throw DimensionError("rank_states: path and return lengths differ");
    }
    const auto n = static_cast<std::size_t>(num_states);

    StateRanking ranking;
    ranking.totals.assign(n, 0.0);
    std::vector<bool> visited(n, false);
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (path[t] < 0 || static_cast<std::size_t>(path[t]) >= n) {
            throw DomainError("rank_states: state index out of range");
        }
        ranking.totals[static_cast<std::size_t>(path[t])] += returns[t];
        visited[static_cast<std::size_t>(path[t])] = true;
    }

    // Visited states with nonzero totals sort by total; everything else
    // (unvisited, or totals that cancelled to zero) falls below them.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto scored = [&](std::size_t s) { return visited[s] && ranking.totals[s] != 0.0; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scored(a) != scored(b)) return scored(a);
        if (ranking.totals[a] != ranking.totals[b]) {
            return ranking.totals[a] > ranking.totals[b];
        }
        return a < b;
    });

    ranking.ranks.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        ranking.ranks[order[r]] = static_cast<int>(r) + 1;
    }
    for (std::size_t r = 0; r < std::min<std::size_t>(2, n); ++r) {
        ranking.top_two.push_back(static_cast<int>(order[r]));
    }
    return ranking;
}

bool timing_signal(const StateRanking& ranking, int current_state) {
    if (current_state < 0 || static_cast<std::size_t>(current_state) >= ranking.ranks.size()) {
        throw DomainError("timing_signal: state index out of range");
    }
    return std::find(ranking.top_two.begin(), ranking.top_two.end(), current_state) !=
           ranking.top_two.end();
}

void write_state_path(const std::string& path, const std::vector<Date>& dates,
                      const std::vector<int>& states, const StateRanking& ranking) {
    if (dates.size() != states.size()) {
        throw DimensionError("write_state_path: date and state counts differ");
    }
    CsvTable table;
    table.header = {"date", "state", "rank", "signal"};
    for (std::size_t t = 0; t < states.size(); ++t) {
        const auto s = static_cast<std::size_t>(states[t]);
        if (s >= ranking.ranks.size()) {
            throw DomainError("write_state_path: state index out of range");
        }
        table.rows.push_back({dates[t].to_string(), std::to_string(states[t]),
                              std::to_string(ranking.ranks[s]),
                              timing_signal(ranking, states[t]) ? "1" : "0"});
    }
    write_csv(path, table);
}

} // namespace qf
