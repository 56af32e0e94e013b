#include "quantfusion/boxcox.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qf {

namespace {

constexpr double kShiftEpsilon = 1e-6;
constexpr int kGridSteps = 500; // lambda = i/100 for i in [-500, 500]

double power_transform(double x, double lambda) {
    if (lambda == 0.0) return std::log(x);
    return (std::pow(x, lambda) - 1.0) / lambda;
}

// Profile log-likelihood of the transform at fixed lambda, up to a
// constant: -(T/2) ln(sigma^2_mle) + (lambda - 1) sum(ln x).
double profile_loglik(const std::vector<double>& shifted, double lambda, double sum_log) {
    const auto t = static_cast<double>(shifted.size());
    double mean = 0.0;
    std::vector<double> y(shifted.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        y[i] = power_transform(shifted[i], lambda);
        mean += y[i];
    }
    mean /= t;
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double var = ss / t;
    if (!(var > 0.0) || !std::isfinite(var)) {
        return -std::numeric_limits<double>::infinity();
    }
    return -0.5 * t * std::log(var) + (lambda - 1.0) * sum_log;
}

} // namespace

BoxCoxChannel boxcox_fit_channel(const std::vector<double>& x,
                                 std::vector<std::string>* warnings) {
    if (x.size() < 20) {
        throw InsufficientDataError("boxcox_fit: need at least 20 observations, got " +
                                    std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw DomainError("boxcox_fit: non-finite input");
    }

    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) {
        if (warnings) warnings->push_back("boxcox_fit: constant series, identity transform");
        BoxCoxChannel c;
        c.identity = true;
        return c;
    }

    BoxCoxChannel c;
    c.shift = std::max(0.0, kShiftEpsilon - *lo);

    std::vector<double> shifted(x.size());
    double sum_log = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        shifted[i] = x[i] + c.shift;
        sum_log += std::log(shifted[i]);
    }

    double best_ll = -std::numeric_limits<double>::infinity();
    for (int i = -kGridSteps; i <= kGridSteps; ++i) {
        const double lambda = static_cast<double>(i) / 100.0;
        const double ll = profile_loglik(shifted, lambda, sum_log);
        if (ll > best_ll) {
            best_ll = ll;
            c.lambda = lambda;
        }
    }
    if (best_ll == -std::numeric_limits<double>::infinity()) {
        throw DomainError("boxcox_fit: degenerate profile likelihood");
    }

    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = power_transform(shifted[i], c.lambda);
    c.mean = mean(y);
    c.stdev = sample_stdev(y);
    if (!(c.stdev > 0.0)) {
        // possible only if the transform collapsed the spread entirely
        if (warnings) warnings->push_back("boxcox_fit: transform degenerate, identity used");
        return BoxCoxChannel{.identity = true};
    }
    return c;
}

BoxCoxTransform boxcox_fit(const std::vector<std::vector<double>>& rows,
                           std::vector<std::string>* warnings) {
    if (rows.empty()) throw InsufficientDataError("boxcox_fit: empty input");
    const std::size_t dim = rows[0].size();
    BoxCoxTransform t;
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> col;
        col.reserve(rows.size());
        for (const auto& row : rows) {
            if (row.size() != dim) throw DimensionError("boxcox_fit: ragged rows");
            col.push_back(row[d]);
        }
        t.channels.push_back(boxcox_fit_channel(col, warnings));
    }
    return t;
}

double boxcox_apply_value(const BoxCoxChannel& c, double x) {
    if (c.identity) return x;
    const double shifted = x + c.shift;
    if (!(shifted > 0.0)) {
        throw DomainError("boxcox_apply: shifted value not positive");
    }
    return (power_transform(shifted, c.lambda) - c.mean) / c.stdev;
}

double boxcox_invert_value(const BoxCoxChannel& c, double y) {
    if (c.identity) return y;
    const double raw = y * c.stdev + c.mean;
    double shifted;
    if (c.lambda == 0.0) {
        shifted = std::exp(raw);
    } else {
        const double base = c.lambda * raw + 1.0;
        if (!(base > 0.0)) {
            throw DomainError("boxcox_invert: value outside the transform range");
        }
        shifted = std::pow(base, 1.0 / c.lambda);
    }
    return shifted - c.shift;
}

namespace {

std::vector<std::vector<double>> map_rows(const BoxCoxTransform& t,
                                          const std::vector<std::vector<double>>& rows,
                                          double (*f)(const BoxCoxChannel&, double)) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() != t.channels.size()) {
            throw DimensionError("boxcox: row width != channel count");
        }
        std::vector<double> mapped(row.size());
        for (std::size_t d = 0; d < row.size(); ++d) mapped[d] = f(t.channels[d], row[d]);
        out.push_back(std::move(mapped));
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> boxcox_apply(const BoxCoxTransform& t,
                                              const std::vector<std::vector<double>>& rows) {
    return map_rows(t, rows, boxcox_apply_value);
}

std::vector<std::vector<double>> boxcox_invert(const BoxCoxTransform& t,
                                               const std::vector<std::vector<double>>& rows) {
    return map_rows(t, rows, boxcox_invert_value);
}

} // namespace qf
