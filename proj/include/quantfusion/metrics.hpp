#pragma once

#include "quantfusion/date.hpp"
#include "quantfusion/portfolio.hpp"

#include <string>
#include <vector>

namespace qf {

struct EquityPoint {
    Date date;
    double equity = 0.0;
    double benchmark = 0.0; // index value scaled to the starting capital

    bool operator==(const EquityPoint&) const = default;
};

using EquityCurve = std::vector<EquityPoint>;

/// Largest peak-to-trough decline as a fraction of the peak. Zero for
/// monotone curves and for fewer than two points.
double max_drawdown(const std::vector<double>& values);

/// Performance summary over one period. Sharpe and information ratio
/// are undefined when their denominators vanish; the flags say which
/// values are meaningful.
struct MetricsRow {
    std::string period; // "overall" or a four-digit year
    double annualized_return = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double sharpe = 0.0;
    double volatility = 0.0;
    double information_ratio = 0.0;
    double max_drawdown = 0.0;
    double turnover = 0.0;
    bool sharpe_defined = true;
    bool information_ratio_defined = true;
};

struct MetricsReport {
    std::vector<MetricsRow> rows; // per calendar year, then overall
};

/// Computes the summary table from a marked equity curve and the fill
/// log. Returns one row per calendar year with at least two curve
/// points plus an "overall" row. `risk_free_rate` is annual.
MetricsReport compute_metrics(const EquityCurve& curve, const std::vector<Fill>& fills,
                              double risk_free_rate = 0.03);

/// Writes `date,equity,benchmark` rows.
void write_equity(const std::string& path, const EquityCurve& curve);
EquityCurve load_equity(const std::string& path);

/// Serializes the report as JSON keyed by period; undefined ratios are
/// emitted as null.
void write_metrics(const std::string& path, const MetricsReport& report);
MetricsReport load_metrics(const std::string& path);

} // namespace qf
