#pragma once

#include "quantfusion/bars.hpp"
#include "quantfusion/panel.hpp"

#include <string>
#include <vector>

namespace qf {

// Values aligned with dates, both sorted ascending.
struct DatedSeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

// Simple return close_t / close_{t-1} - 1, dated by the day it realizes.
// Output starts at the second bar.
DatedSeries index_simple_returns(const BarSeries& index_bars);

struct ICEntry {
    std::string factor;
    double ic = 0.0;
    int rank = 0; // 1 = largest |ic|
    bool selected = false;
};

struct ICReport {
    std::vector<ICEntry> entries;        // sorted by rank
    std::vector<std::string> selected;   // top-k factor names in rank order
};

// Pearson correlation of each factor against the index return on the next
// trading day. Observations pool every (date, stock) pair; panel dates
// without a following return date are skipped. The panel must be at the
// standardized stage. Ranking is by |ic| descending, ties broken by factor
// name; the top_k best become the selected set. A factor with zero variance
// across the pooled observations gets ic = 0 (nothing to correlate).
// Throws InsufficientDataError with fewer than 3 paired observations.
ICReport compute_ic(const FactorPanel& panel, const DatedSeries& index_returns,
                    int top_k = 6);

// Conventional variant: each factor value is paired with that stock's own
// next-day return instead of the index's. Same ranking rules.
ICReport compute_ic_per_stock(const FactorPanel& panel,
                              const std::vector<BarSeries>& stocks, int top_k = 6);

// CSV with header `factor,ic,rank,selected`.
void write_ic_report(const std::string& path, const ICReport& report);

} // namespace qf
