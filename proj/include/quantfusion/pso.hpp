#pragma once

#include "quantfusion/network.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qf {

enum class InertiaMode {
    linear_decay,  // w_max - (w_max - w_min) * iter / i_max
    paper_literal, // w_max - (w_max - w_min) / iter; grows from w_min to w_max
};

struct SwarmConfig {
    double c1 = 1.5;
    double c2 = 1.5;
    double w_max = 0.9;
    double w_min = 0.4;
    int i_max = 300;
    int ps = 100; // population size
    double p_max = 3.0;
    double p_min = -3.0;
    double v_max = 0.1;
    double v_min = -0.1;
    double amp = 0.2; // per-particle chance per iteration of one coordinate reset
    std::uint64_t seed = 0;
    InertiaMode inertia_mode = InertiaMode::linear_decay;
    // Stop after this many consecutive iterations with gbest improvement
    // below stall_tol. Set patience to i_max to disable.
    int stall_patience = 50;
    double stall_tol = 1e-10;

    void validate() const;
};

// Inertia weight for 1-based iteration index.
double inertia(int iter, const SwarmConfig& config);

struct SwarmResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::vector<double> trace; // gbest fitness after each iteration run
    int iterations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Global-best PSO minimizer. Per iteration each particle draws scalar r1,
// r2, moves with velocity and position clamped to the configured bounds,
// then mutates one uniformly chosen coordinate with probability amp.
// Personal bests update after evaluation; the group best updates at the end
// of the iteration, so all moves within one iteration see the same gbest.
SwarmResult pso_minimize(const Objective& objective, int dim, const SwarmConfig& config);

struct TrainedNetwork {
    NetworkShape shape;
    NetworkParams params;
    double fitness = 0.0;       // final training RMSE
    std::vector<double> trace;  // gbest RMSE per iteration
};

// Trains the network on the samples by minimizing fitness_rmse.
TrainedNetwork pso_train(const std::vector<TrainingSample>& samples,
                         const NetworkShape& shape, const SwarmConfig& config);

} // namespace qf
