#pragma once

#include <string>
#include <vector>

namespace qf {

// k -> n -> 1 feedforward net. The hidden layer is a plain affine map; the
// single activation sits on the output sum. a controls the steepness of the
// output squash, whose range is (-0.1, 0.1).
struct NetworkShape {
    int k = 4;      // input nodes
    int n = 5;      // hidden nodes
    double a = 0.1; // activation steepness

    [[nodiscard]] int param_count() const { return n * k + n + n + 1; }
    void validate() const; // k >= 1, n >= 1, a > 0
};

struct NetworkParams {
    std::vector<std::vector<double>> w; // n rows of k hidden weights
    std::vector<double> h;              // n hidden biases
    std::vector<double> q;              // n output weights
    double o1 = 0.0;                    // output bias
};

// 0.1 * (e^{ax} - 1)/(e^{ax} + 1). Computed as 0.1 * tanh(a*x/2), which is
// the same function without overflow for large |ax|.
double activation(double x, double a);

// Inverse on the open interval (-0.1, 0.1); throws DomainError outside.
double activation_inverse(double y, double a);

double forward(const NetworkParams& net, const NetworkShape& shape,
               const std::vector<double>& input);

// d forward / d parameter, in encode() order. Used by the training
// diagnostics and pinned against finite differences in the tests.
std::vector<double> forward_gradient(const NetworkParams& net, const NetworkShape& shape,
                                     const std::vector<double>& input);

// Flat layout: w row-major, then h, then q, then o1.
std::vector<double> encode(const NetworkParams& net, const NetworkShape& shape);
NetworkParams decode(const std::vector<double>& position, const NetworkShape& shape);

struct TrainingSample {
    std::vector<double> input; // length k
    double target = 0.0;       // next trading day's fractional return
};

// Root mean square prediction error of the decoded network over the samples.
double fitness_rmse(const std::vector<double>& position,
                    const std::vector<TrainingSample>& samples,
                    const NetworkShape& shape);

struct PickResult {
    std::vector<std::string> picks; // ids, best predicted return first
    bool short_of_candidates = false;
};

// Scores each (id, reduced factor row) with forward() and returns the
// n_pick best ids, score descending, ties by id ascending. Fewer candidates
// than n_pick returns everything with the flag set.
PickResult predict_and_pick(const NetworkParams& net, const NetworkShape& shape,
                            const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                            int n_pick);

// JSON document with the shape fields and the flat parameter array.
void save_network(const std::string& path, const NetworkShape& shape,
                  const NetworkParams& params);
std::pair<NetworkShape, NetworkParams> load_network(const std::string& path);

} // namespace qf
