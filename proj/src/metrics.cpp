#include "quantfusion/metrics.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace qf {

namespace {

constexpr double kTradingDaysPerYear = 252.0;

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double sample_cov(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = mean_of(xs), my = mean_of(ys);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
    return s / static_cast<double>(xs.size() - 1);
}

double annualized(double first, double last, std::size_t num_returns) {
    if (!(first > 0.0)) throw DomainError("equity curve must stay positive");
    double growth = last / first;
    if (!(growth > 0.0)) throw DomainError("equity curve must stay positive");
    return std::pow(growth, kTradingDaysPerYear / static_cast<double>(num_returns)) - 1.0;
}

std::vector<double> simple_returns(const std::vector<double>& values) {
    std::vector<double> out;
    out.reserve(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i - 1] > 0.0)) throw DomainError("equity curve must stay positive");
        out.push_back(values[i] / values[i - 1] - 1.0);
    }
    return out;
}

/// One summary row over the given curve slice. `anchor` optionally
/// supplies the point just before the slice so the first day still has
/// a return; drawdown, mean equity, and turnover use the slice alone.
MetricsRow summarize(const std::string& period, const EquityCurve& curve, std::size_t begin,
                     std::size_t end, const EquityPoint* anchor, const std::vector<Fill>& fills,
                     double risk_free_rate) {
    std::vector<double> equity, bench;
    if (anchor != nullptr) {
        equity.push_back(anchor->equity);
        bench.push_back(anchor->benchmark);
    }
    for (std::size_t i = begin; i < end; ++i) {
        equity.push_back(curve[i].equity);
        bench.push_back(curve[i].benchmark);
    }
    if (equity.size() < 2)
        throw InsufficientDataError("need at least two equity points for metrics");

    std::vector<double> r = simple_returns(equity);
    std::vector<double> b = simple_returns(bench);
    std::size_t n = r.size();

    MetricsRow row;
    row.period = period;
    row.annualized_return = annualized(equity.front(), equity.back(), n);
    double ann_bench = annualized(bench.front(), bench.back(), n);

    double var_b = sample_cov(b, b);
    if (var_b <= 0.0)
        throw DomainError("benchmark variance is zero; beta is undefined");
    row.beta = sample_cov(r, b) / var_b;
    row.alpha = row.annualized_return - risk_free_rate -
                row.beta * (ann_bench - risk_free_rate);

    row.volatility = sample_std(r) * std::sqrt(kTradingDaysPerYear);
    row.sharpe_defined = row.volatility > 0.0;
    row.sharpe = row.sharpe_defined
                     ? (row.annualized_return - risk_free_rate) / row.volatility
                     : 0.0;

    std::vector<double> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = r[i] - b[i];
    double te = sample_std(active);
    row.information_ratio_defined = te > 0.0;
    row.information_ratio =
        row.information_ratio_defined
            ? std::sqrt(kTradingDaysPerYear) * mean_of(active) / te
            : 0.0;

    std::vector<double> slice_equity;
    slice_equity.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) slice_equity.push_back(curve[i].equity);
    row.max_drawdown = max_drawdown(slice_equity);

    double traded = 0.0;
    for (const auto& f : fills) {
        if (f.date < curve[begin].date || curve[end - 1].date < f.date) continue;
        traded += f.shares * f.exec_price;
    }
    double mean_equity = mean_of(slice_equity);
    row.turnover = traded / mean_equity *
                   (kTradingDaysPerYear / static_cast<double>(end - begin));
    return row;
}

} // namespace

double max_drawdown(const std::vector<double>& values) {
    double peak = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("drawdown input must be finite");
        if (v > peak) peak = v;
        if (peak > 0.0) {
            double dd = (peak - v) / peak;
            if (dd > worst) worst = dd;
        }
    }
    return worst;
}

MetricsReport compute_metrics(const EquityCurve& curve, const std::vector<Fill>& fills,
                              double risk_free_rate) {
    if (curve.size() < 2)
        throw InsufficientDataError("need at least two equity points for metrics");
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (!(curve[i - 1].date < curve[i].date))
            throw ValidationError("equity curve dates must be strictly increasing");

    MetricsReport report;

    // Per-year rows. Each year slice borrows the previous point as an
    // anchor so its first trading day contributes a return.
    std::size_t year_begin = 0;
    for (std::size_t i = 1; i <= curve.size(); ++i) {
        if (i < curve.size() && curve[i].date.year == curve[year_begin].date.year) continue;
        if (i - year_begin >= 2) {
            const EquityPoint* anchor = year_begin > 0 ? &curve[year_begin - 1] : nullptr;
            report.rows.push_back(summarize(std::to_string(curve[year_begin].date.year),
                                            curve, year_begin, i, anchor, fills,
                                            risk_free_rate));
        }
        year_begin = i;
    }

    report.rows.push_back(
        summarize("overall", curve, 0, curve.size(), nullptr, fills, risk_free_rate));
    return report;
}

void write_equity(const std::string& path, const EquityCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "date,equity,benchmark\n";
    for (const auto& p : curve) {
        out << p.date.to_string() << ',' << format_number(p.equity) << ','
            << format_number(p.benchmark) << '\n';
    }
    if (!out.good()) throw IoError("failed writing " + path);
}

EquityCurve load_equity(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.header != std::vector<std::string>{"date", "equity", "benchmark"})
        throw ParseError(path + ": unexpected equity curve header");
    EquityCurve curve;
    curve.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        EquityPoint p;
        p.date = parse_date(row[0]);
        p.equity = parse_number(row[1], "equity");
        p.benchmark = parse_number(row[2], "benchmark");
        curve.push_back(p);
    }
    return curve;
}

namespace {

nlohmann::json row_to_json(const MetricsRow& row) {
    nlohmann::json j;
    j["annualized_return"] = row.annualized_return;
    j["alpha"] = row.alpha;
    j["beta"] = row.beta;
    j["sharpe"] = row.sharpe_defined ? nlohmann::json(row.sharpe) : nlohmann::json();
    j["volatility"] = row.volatility;
    j["information_ratio"] = row.information_ratio_defined
                                 ? nlohmann::json(row.information_ratio)
                                 : nlohmann::json();
    j["max_drawdown"] = row.max_drawdown;
    j["turnover"] = row.turnover;
    return j;
}

MetricsRow row_from_json(const std::string& period, const nlohmann::json& j) {
    MetricsRow row;
    row.period = period;
    row.annualized_return = j.at("annualized_return").get<double>();
    row.alpha = j.at("alpha").get<double>();
    row.beta = j.at("beta").get<double>();
    row.volatility = j.at("volatility").get<double>();
    row.max_drawdown = j.at("max_drawdown").get<double>();
    row.turnover = j.at("turnover").get<double>();
    row.sharpe_defined = !j.at("sharpe").is_null();
    if (row.sharpe_defined) row.sharpe = j.at("sharpe").get<double>();
    row.information_ratio_defined = !j.at("information_ratio").is_null();
    if (row.information_ratio_defined)
        row.information_ratio = j.at("information_ratio").get<double>();
    return row;
}

} // namespace

void write_metrics(const std::string& path, const MetricsReport& report) {
    nlohmann::json periods = nlohmann::json::object();
    for (const auto& row : report.rows) periods[row.period] = row_to_json(row);
    nlohmann::json j;
    j["periods"] = periods;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out.good()) throw IoError("failed writing " + path);
}

MetricsReport load_metrics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    MetricsReport report;
    try {
        const auto& periods = j.at("periods");
        std::vector<std::string> years;
        for (auto it = periods.begin(); it != periods.end(); ++it)
            if (it.key() != "overall") years.push_back(it.key());
        std::sort(years.begin(), years.end());
        for (const auto& y : years) report.rows.push_back(row_from_json(y, periods.at(y)));
        if (periods.contains("overall"))
            report.rows.push_back(row_from_json("overall", periods.at("overall")));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return report;
}

} // namespace qf
