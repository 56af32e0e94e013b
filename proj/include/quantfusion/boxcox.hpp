#pragma once

#include <string>
#include <vector>

namespace qf {

/// Power-transform parameters for one variable, including the
/// standardization applied after the transform. A channel fitted on a
/// constant series is marked `identity` and passes values through
/// untouched.
struct BoxCoxChannel {
    double lambda = 1.0;
    double shift = 0.0; // added to the input before the power transform
    double mean = 0.0;  // moments of the transformed fit data
    double stdev = 1.0;
    bool identity = false;

    bool operator==(const BoxCoxChannel&) const = default;
};

/// One channel per input column.
struct BoxCoxTransform {
    std::vector<BoxCoxChannel> channels;

    bool operator==(const BoxCoxTransform&) const = default;
};

/// Fits one channel: shift = max(0, 1e-6 - min(x)), then the power
/// parameter maximizing the profile log-likelihood over a lambda grid
/// [-5, 5] in steps of 0.01, then standardization moments. Needs at
/// least 20 observations. A constant series yields an identity channel
/// and appends a note to `warnings` when given.
BoxCoxChannel boxcox_fit_channel(const std::vector<double>& x,
                                 std::vector<std::string>* warnings = nullptr);

/// Column-wise fit over T x D rows.
BoxCoxTransform boxcox_fit(const std::vector<std::vector<double>>& rows,
                           std::vector<std::string>* warnings = nullptr);

// Scalar transform and its inverse. apply requires x + shift > 0;
// invert requires the destandardized value to lie in the transform's
// range. Round trips recover inputs within 1e-8.
double boxcox_apply_value(const BoxCoxChannel& c, double x);
double boxcox_invert_value(const BoxCoxChannel& c, double y);

std::vector<std::vector<double>> boxcox_apply(const BoxCoxTransform& t,
                                              const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> boxcox_invert(const BoxCoxTransform& t,
                                               const std::vector<std::vector<double>>& rows);

} // namespace qf
