#include "quantfusion/preprocess.hpp"

#include "quantfusion/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace qf {

namespace {

double value_at(const FactorPanel& panel, std::size_t row, std::size_t factor) {
    const auto& v = panel.rows[row].values[factor];
    if (!v) throw ValidationError("unexpected null past cleaning stage");
    return *v;
}

struct MeanStd {
    double mean = 0.0;
    double stdev = 0.0; // sample, n-1
};

MeanStd cross_section_stats(const FactorPanel& panel,
                            const std::vector<std::size_t>& rows, std::size_t factor) {
    MeanStd ms;
    const auto n = static_cast<double>(rows.size());
    for (std::size_t r : rows) ms.mean += value_at(panel, r, factor);
    ms.mean /= n;
    if (rows.size() < 2) return ms;
    double ss = 0.0;
    for (std::size_t r : rows) {
        const double d = value_at(panel, r, factor) - ms.mean;
        ss += d * d;
    }
    ms.stdev = std::sqrt(ss / (n - 1.0));
    return ms;
}

} // namespace

FactorPanel drop_null_rows(const FactorPanel& panel) {
    require_stage(panel, PanelStage::raw, "drop_null_rows");
    FactorPanel out;
    out.stage = PanelStage::cleaned;
    out.factor_names = panel.factor_names;
    for (const PanelRow& row : panel.rows) {
        const bool has_null = std::any_of(row.values.begin(), row.values.end(),
                                          [](const auto& v) { return !v.has_value(); });
        if (!has_null) out.rows.push_back(row);
    }
    if (out.rows.empty()) {
        throw EmptyPanelError("every row contained at least one null factor value");
    }
    return out;
}

FactorPanel winsorize_3sigma(const FactorPanel& panel, std::vector<ClampBounds>* bounds) {
    require_stage(panel, PanelStage::cleaned, "winsorize_3sigma");
    FactorPanel out = panel;
    out.stage = PanelStage::winsorized;
    for (const auto& [date, rows] : out.group_by_date()) {
        for (std::size_t f = 0; f < out.factor_names.size(); ++f) {
            const MeanStd ms = cross_section_stats(out, rows, f);
            if (ms.stdev == 0.0) continue;
            const double lo = ms.mean - 3.0 * ms.stdev;
            const double hi = ms.mean + 3.0 * ms.stdev;
            if (bounds) bounds->push_back({date, f, lo, hi});
            for (std::size_t r : rows) {
                double& v = *out.rows[r].values[f];
                v = std::clamp(v, lo, hi);
            }
        }
    }
    return out;
}

FactorPanel neutralize(const FactorPanel& panel, std::vector<std::string>* warnings) {
    require_stage(panel, PanelStage::winsorized, "neutralize");
    FactorPanel out = panel;
    out.stage = PanelStage::neutralized;

    for (const auto& [date, rows] : out.group_by_date()) {
        const auto n = static_cast<Eigen::Index>(rows.size());

        std::set<std::string> industries;
        for (std::size_t r : rows) industries.insert(out.rows[r].industry);
        std::vector<std::string> ind_order(industries.begin(), industries.end());

        Eigen::MatrixXd design(n, 2 + static_cast<Eigen::Index>(ind_order.size()));
        design.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            const PanelRow& row = out.rows[rows[static_cast<std::size_t>(i)]];
            design(i, 0) = 1.0;
            design(i, 1) = std::log(row.mktcap);
            const auto it = std::lower_bound(ind_order.begin(), ind_order.end(), row.industry);
            design(i, 2 + static_cast<Eigen::Index>(it - ind_order.begin())) = 1.0;
        }

        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
        if (cod.rank() >= n) {
            // A saturated industry design would reproduce y exactly and
            // leave nothing but zeros. Drop the industry columns instead.
            if (warnings) {
                warnings->push_back("neutralize: industry design saturated on " +
                                    date.to_string() + ", using mktcap only");
            }
            design = design.leftCols(2).eval();
            cod.compute(design);
        }

        Eigen::VectorXd y(n);
        for (std::size_t f = 0; f < out.factor_names.size(); ++f) {
            for (Eigen::Index i = 0; i < n; ++i) {
                y(i) = value_at(out, rows[static_cast<std::size_t>(i)], f);
            }
            const Eigen::VectorXd resid = y - design * cod.solve(y);
            for (Eigen::Index i = 0; i < n; ++i) {
                out.rows[rows[static_cast<std::size_t>(i)]].values[f] = resid(i);
            }
        }
    }
    return out;
}

FactorPanel zscore(const FactorPanel& panel) {
    require_stage(panel, PanelStage::neutralized, "zscore");
    FactorPanel out = panel;
    out.stage = PanelStage::standardized;
    for (const auto& [date, rows] : out.group_by_date()) {
        for (std::size_t f = 0; f < out.factor_names.size(); ++f) {
            const MeanStd ms = cross_section_stats(out, rows, f);
            for (std::size_t r : rows) {
                double& v = *out.rows[r].values[f];
                v = ms.stdev == 0.0 ? 0.0 : (v - ms.mean) / ms.stdev;
            }
        }
    }
    return out;
}

FactorPanel preprocess_panel(const FactorPanel& raw, std::vector<std::string>* warnings) {
    return zscore(neutralize(winsorize_3sigma(drop_null_rows(raw)), warnings));
}

} // namespace qf
