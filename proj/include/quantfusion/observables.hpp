#pragma once

#include "quantfusion/bars.hpp"

#include <vector>

namespace qf {

// One observation vector for the market-state model. Field order here fixes
// the component order used everywhere downstream (emission means, covariance
// diagonals, serialized parameter files).
struct ObservationRow {
    double lgrfsb = 0.0; // log growth of financing security balance
    double tv = 0.0;     // raw trading volume
    double dlshlp = 0.0; // log(high/low)
    double dlr = 0.0;    // one-day log return of close
    double fdlr = 0.0;   // five-day log return of close

    static constexpr int kDim = 5;

    [[nodiscard]] double component(int i) const;
};

struct ObservationSeries {
    std::vector<Date> dates; // aligned 1:1 with rows
    std::vector<ObservationRow> rows;

    // Rows as a T x 5 matrix in component order.
    [[nodiscard]] std::vector<std::vector<double>> matrix() const;
};

// Derives the five observables from index bars. The five-day return needs a
// five-bar lookback, so the output starts at the sixth bar and has length
// T - 5. Throws InsufficientDataError below 6 bars and DomainError on
// nonpositive price or fsb.
ObservationSeries compute_observables(const BarSeries& index_bars);

} // namespace qf
