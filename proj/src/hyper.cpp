#include "quantfusion/hyper.hpp"

#include "quantfusion/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace qf {

bool range_contains(const DateRange& range, const Date& d) {
    return !(d < range.begin) && !(range.end < d);
}

Eq6Metrics eq6_metrics(const std::vector<std::vector<double>>& daily_predictions,
                       const std::vector<double>& next_index_returns) {
    if (daily_predictions.size() != next_index_returns.size()) {
        throw DimensionError("eq6: day counts disagree");
    }
    double ss = 0.0, sa = 0.0;
    std::size_t terms = 0;
    for (std::size_t t = 0; t < daily_predictions.size(); ++t) {
        for (double p : daily_predictions[t]) {
            const double err = p - next_index_returns[t];
            ss += err * err;
            sa += std::abs(err);
            ++terms;
        }
    }
    if (terms == 0) throw DomainError("eq6: no prediction terms");
    Eq6Metrics m;
    m.rmse = std::sqrt(ss / static_cast<double>(terms));
    m.mae = sa / static_cast<double>(terms);
    return m;
}

ICReport compute_ic_any(const FactorPanel& panel, const BarSeries& index,
                        const std::vector<BarSeries>& stocks, ICMode mode, int top_k) {
    if (mode == ICMode::stock_next_day) {
        return compute_ic_per_stock(panel, stocks, top_k);
    }
    return compute_ic(panel, index_simple_returns(index), top_k);
}

namespace {

FactorPanel slice_panel(const FactorPanel& panel, const DateRange& range) {
    FactorPanel out;
    out.stage = panel.stage;
    out.factor_names = panel.factor_names;
    for (const PanelRow& row : panel.rows) {
        if (range_contains(range, row.date)) out.rows.push_back(row);
    }
    return out;
}

std::vector<std::size_t> factor_indices(const FactorPanel& panel,
                                        const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const std::string& name : names) {
        const auto it = std::find(panel.factor_names.begin(), panel.factor_names.end(), name);
        if (it == panel.factor_names.end()) {
            throw ValidationError("panel lacks factor '" + name + "'");
        }
        idx.push_back(static_cast<std::size_t>(it - panel.factor_names.begin()));
    }
    return idx;
}

std::vector<double> selected_values(const PanelRow& row, const std::vector<std::size_t>& idx) {
    std::vector<double> v;
    v.reserve(idx.size());
    for (std::size_t f : idx) {
        if (!row.values[f]) throw ValidationError("null factor value in standardized panel");
        v.push_back(*row.values[f]);
    }
    return v;
}

// Next trading day's simple return after `d`, from a per-series return
// lookup. Returns nullptr when no later return exists.
const double* next_return_after(const DatedSeries& series, const Date& d) {
    auto it = std::upper_bound(series.dates.begin(), series.dates.end(), d);
    if (it == series.dates.end()) return nullptr;
    return &series.values[static_cast<std::size_t>(it - series.dates.begin())];
}

} // namespace

PickerModel train_picker(const FactorPanel& panel, const std::vector<BarSeries>& stocks,
                         const BarSeries& index, const DateRange& train_range,
                         int factor_count, const NetworkShape& shape,
                         const SwarmConfig& swarm, ICMode ic_mode) {
    require_stage(panel, PanelStage::standardized, "train_picker");
    shape.validate();
    if (factor_count < shape.k) {
        throw DomainError("train_picker: factor_count must be >= network input width");
    }
    if (factor_count > static_cast<int>(panel.factor_names.size())) {
        throw DomainError("train_picker: factor_count exceeds panel factor count");
    }

    const FactorPanel window = slice_panel(panel, train_range);
    if (window.rows.empty()) {
        throw InsufficientDataError("train_picker: no panel rows in training range");
    }

    PickerModel model;
    model.shape = shape;
    model.factors =
        compute_ic_any(window, index, stocks, ic_mode, factor_count).selected;

    const std::vector<std::size_t> idx = factor_indices(window, model.factors);
    std::vector<std::vector<double>> rows;
    rows.reserve(window.rows.size());
    for (const PanelRow& row : window.rows) rows.push_back(selected_values(row, idx));
    model.pca = pca_fit(rows, shape.k);

    std::map<std::string, DatedSeries> returns;
    for (const BarSeries& s : stocks) returns[s.id] = index_simple_returns(s);

    std::vector<TrainingSample> samples;
    for (std::size_t i = 0; i < window.rows.size(); ++i) {
        const PanelRow& row = window.rows[i];
        const auto it = returns.find(row.stock_id);
        if (it == returns.end()) continue;
        const double* target = next_return_after(it->second, row.date);
        if (!target) continue;
        samples.push_back({pca_transform_row(model.pca, rows[i]), *target});
    }
    if (samples.empty()) {
        throw InsufficientDataError("train_picker: no samples with next-day returns");
    }

    TrainedNetwork trained = pso_train(samples, shape, swarm);
    model.params = std::move(trained.params);
    model.train_rmse = trained.fitness;
    return model;
}

std::vector<std::pair<std::string, std::vector<double>>> prediction_rows(
    const FactorPanel& panel, const Date& date, const PickerModel& model) {
    const std::vector<std::size_t> idx = factor_indices(panel, model.factors);
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (const PanelRow& row : panel.rows) {
        if (!(row.date == date)) continue;
        out.emplace_back(row.stock_id,
                         pca_transform_row(model.pca, selected_values(row, idx)));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

void save_picker_model(const std::string& path, const PickerModel& model) {
    nlohmann::json doc;
    doc["k"] = model.shape.k;
    doc["n"] = model.shape.n;
    doc["a"] = model.shape.a;
    doc["params"] = encode(model.params, model.shape);
    doc["factors"] = model.factors;
    doc["train_rmse"] = model.train_rmse;
    doc["pca"]["mean"] = model.pca.mean;
    doc["pca"]["components"] = model.pca.components;
    doc["pca"]["explained_variance"] = model.pca.explained_variance;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
}

PickerModel load_picker_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        nlohmann::json doc;
        in >> doc;
        PickerModel model;
        model.shape.k = doc.at("k").get<int>();
        model.shape.n = doc.at("n").get<int>();
        model.shape.a = doc.at("a").get<double>();
        model.shape.validate();
        model.params = decode(doc.at("params").get<std::vector<double>>(), model.shape);
        model.factors = doc.at("factors").get<std::vector<std::string>>();
        model.train_rmse = doc.value("train_rmse", 0.0);
        model.pca.mean = doc.at("pca").at("mean").get<std::vector<double>>();
        model.pca.components =
            doc.at("pca").at("components").get<std::vector<std::vector<double>>>();
        model.pca.explained_variance =
            doc.at("pca").at("explained_variance").get<std::vector<double>>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

Eq6Metrics score_trial(const FactorPanel& panel, const std::vector<BarSeries>& stocks,
                       const BarSeries& index, const DateRange& train_range,
                       const DateRange& test_range, int factor_count,
                       const NetworkShape& shape, const SwarmConfig& swarm,
                       ICMode ic_mode) {
    const PickerModel model =
        train_picker(panel, stocks, index, train_range, factor_count, shape, swarm, ic_mode);

    const DatedSeries index_returns = index_simple_returns(index);
    const FactorPanel test = slice_panel(panel, test_range);

    std::vector<std::vector<double>> daily_predictions;
    std::vector<double> next_returns;
    for (const auto& [date, rows] : test.group_by_date()) {
        const double* r = next_return_after(index_returns, date);
        if (!r) continue;
        std::vector<double> preds;
        for (const auto& row : prediction_rows(test, date, model)) {
            preds.push_back(forward(model.params, model.shape, row.second));
        }
        if (preds.empty()) continue;
        daily_predictions.push_back(std::move(preds));
        next_returns.push_back(*r);
    }
    if (daily_predictions.empty()) {
        throw InsufficientDataError("hyper: no scorable test days");
    }
    return eq6_metrics(daily_predictions, next_returns);
}

} // namespace

HyperResult hyperparameter_search(const FactorPanel& panel,
                                  const std::vector<BarSeries>& stocks,
                                  const BarSeries& index, const DateRange& train_range,
                                  const DateRange& test_range, const HyperGrids& grids,
                                  const NetworkShape& defaults, int default_factor_count,
                                  const SwarmConfig& swarm, ICMode ic_mode) {
    defaults.validate();
    if (grids.hidden_nodes.empty() || grids.input_nodes.empty() ||
        grids.steepness.empty() || grids.factor_counts.empty()) {
        throw DomainError("hyperparameter_search: empty grid");
    }
    const bool disjoint =
        train_range.end < test_range.begin || test_range.end < train_range.begin;
    if (!disjoint) {
        throw ValidationError("hyperparameter_search: train and test ranges overlap");
    }

    std::vector<HyperTrial> trials;
    auto add_trial = [&](const std::string& dim, double value, NetworkShape shape,
                         int factor_count) {
        HyperTrial trial;
        trial.dimension = dim;
        trial.value = value;
        trial.shape = shape;
        trial.factor_count = factor_count;
        trial.metrics = score_trial(panel, stocks, index, train_range, test_range,
                                    factor_count, shape, swarm, ic_mode);
        trials.push_back(std::move(trial));
    };

    add_trial("default", 0.0, defaults, default_factor_count);
    for (int n : grids.hidden_nodes) {
        if (n == defaults.n) continue;
        NetworkShape s = defaults;
        s.n = n;
        add_trial("hidden_nodes", n, s, default_factor_count);
    }
    for (int k : grids.input_nodes) {
        if (k == defaults.k) continue;
        NetworkShape s = defaults;
        s.k = k;
        add_trial("input_nodes", k, s, default_factor_count);
    }
    for (double a : grids.steepness) {
        if (a == defaults.a) continue;
        NetworkShape s = defaults;
        s.a = a;
        add_trial("steepness", a, s, default_factor_count);
    }
    for (int fc : grids.factor_counts) {
        if (fc == default_factor_count) continue;
        add_trial("factor_counts", fc, defaults, fc);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i) {
        if (trials[i].metrics.rmse < trials[best].metrics.rmse) best = i;
    }

    HyperResult result;
    result.shape = trials[best].shape;
    result.factor_count = trials[best].factor_count;
    result.trials = std::move(trials);
    return result;
}

} // namespace qf
