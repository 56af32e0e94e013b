#pragma once

#include "quantfusion/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace qf {

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw DomainError("mean of empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Sample variance, n-1 denominator.
inline double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw DomainError("sample variance needs at least 2 points");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double sample_stdev(const std::vector<double>& x) {
    return std::sqrt(sample_variance(x));
}

// Covariance with n-1 denominator, matching sample_variance.
inline double sample_covariance(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("covariance: length mismatch");
    if (x.size() < 2) throw DomainError("covariance needs at least 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

// Pearson correlation. Throws if either side has zero variance.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double sx = sample_stdev(x);
    const double sy = sample_stdev(y);
    if (sx == 0.0 || sy == 0.0) {
        throw DomainError("pearson: zero-variance input");
    }
    return sample_covariance(x, y) / (sx * sy);
}

} // namespace qf
