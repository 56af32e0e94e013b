#pragma once

#include "quantfusion/bars.hpp"
#include "quantfusion/ic.hpp"
#include "quantfusion/network.hpp"
#include "quantfusion/panel.hpp"
#include "quantfusion/pca.hpp"
#include "quantfusion/pso.hpp"

#include <string>
#include <vector>

namespace qf {

// Inclusive date range.
struct DateRange {
    Date begin;
    Date end;
};

bool range_contains(const DateRange& range, const Date& d);

// Prediction error metrics pooled over every (day, stock) term: each
// prediction on day t is compared against the single next-day index return
// for day t. Both containers are indexed by day.
struct Eq6Metrics {
    double rmse = 0.0;
    double mae = 0.0;
};

Eq6Metrics eq6_metrics(const std::vector<std::vector<double>>& daily_predictions,
                       const std::vector<double>& next_index_returns);

// Which return series factors are ranked against.
enum class ICMode {
    index_next_day, // factor(t, s) vs next-day index return (degenerate on
                    // cross-sectionally standardized panels; see compute_ic)
    stock_next_day, // factor(t, s) vs that stock's own next-day return
};

ICReport compute_ic_any(const FactorPanel& panel, const BarSeries& index,
                        const std::vector<BarSeries>& stocks, ICMode mode, int top_k);

// Everything needed to turn a raw factor row into a ranked stock pick:
// which factors feed the model, the projection to the network's input
// width, and the trained network itself.
struct PickerModel {
    std::vector<std::string> factors; // selected names, IC rank order
    PCAModel pca;
    NetworkShape shape;
    NetworkParams params;
    double train_rmse = 0.0;
};

// Fits the whole picker pipeline on the panel rows inside train_range:
// IC-selects factor_count factors, fits PCA down to shape.k dimensions,
// builds (reduced row, next-day stock return) samples and trains the
// network with the swarm. The panel must be standardized.
PickerModel train_picker(const FactorPanel& panel, const std::vector<BarSeries>& stocks,
                         const BarSeries& index, const DateRange& train_range,
                         int factor_count, const NetworkShape& shape,
                         const SwarmConfig& swarm, ICMode ic_mode);

// Reduced input rows for every stock with a panel row at `date`, ready for
// predict_and_pick. Ordered by stock id.
std::vector<std::pair<std::string, std::vector<double>>> prediction_rows(
    const FactorPanel& panel, const Date& date, const PickerModel& model);

// Superset of the plain network document: adds the selected factors and the
// PCA projection so the model is usable on fresh panels. load_network()
// still reads these files.
void save_picker_model(const std::string& path, const PickerModel& model);
PickerModel load_picker_model(const std::string& path);

struct HyperGrids {
    std::vector<int> hidden_nodes;
    std::vector<int> input_nodes;
    std::vector<double> steepness;
    std::vector<int> factor_counts;
};

struct HyperTrial {
    std::string dimension; // "default", "hidden_nodes", "input_nodes", ...
    double value = 0.0;
    NetworkShape shape;
    int factor_count = 0;
    Eq6Metrics metrics;
};

struct HyperResult {
    NetworkShape shape;
    int factor_count = 0;
    std::vector<HyperTrial> trials;
};

// One-at-a-time sweep around the incumbent defaults: every grid value that
// differs from the default in exactly one dimension gets trained on
// train_range and scored on test_range with eq6_metrics. Lowest RMSE wins;
// the incumbent wins ties. Ranges must be disjoint and every grid nonempty.
HyperResult hyperparameter_search(const FactorPanel& panel,
                                  const std::vector<BarSeries>& stocks,
                                  const BarSeries& index, const DateRange& train_range,
                                  const DateRange& test_range, const HyperGrids& grids,
                                  const NetworkShape& defaults, int default_factor_count,
                                  const SwarmConfig& swarm, ICMode ic_mode);

} // namespace qf
