#include "quantfusion/pso.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/rng.hpp"

#include <algorithm>
#include <limits>

namespace qf {

void SwarmConfig::validate() const {
    if (w_max < w_min) throw DomainError("swarm config: w_max < w_min");
    if (p_max <= p_min) throw DomainError("swarm config: p_max <= p_min");
    if (v_max <= v_min) throw DomainError("swarm config: v_max <= v_min");
    if (ps < 2) throw DomainError("swarm config: population must be >= 2");
    if (amp < 0 || amp > 1) throw DomainError("swarm config: amp must lie in [0, 1]");
    if (i_max < 1) throw DomainError("swarm config: i_max must be >= 1");
    if (c1 < 0 || c2 < 0) throw DomainError("swarm config: c1, c2 must be >= 0");
    if (stall_patience < 1) throw DomainError("swarm config: stall_patience must be >= 1");
    if (stall_tol < 0) throw DomainError("swarm config: stall_tol must be >= 0");
}

double inertia(int iter, const SwarmConfig& config) {
    if (iter < 1 || iter > config.i_max) {
        throw DomainError("inertia: iteration index out of [1, i_max]");
    }
    const double span = config.w_max - config.w_min;
    if (config.inertia_mode == InertiaMode::paper_literal) {
        return config.w_max - span / static_cast<double>(iter);
    }
    return config.w_max - span * static_cast<double>(iter) / static_cast<double>(config.i_max);
}

SwarmResult pso_minimize(const Objective& objective, int dim, const SwarmConfig& config) {
    config.validate();
    if (dim < 1) throw DomainError("pso: dimension must be >= 1");

    Rng rng(config.seed);
    const auto d = static_cast<std::size_t>(dim);
    const auto ps = static_cast<std::size_t>(config.ps);

    std::vector<std::vector<double>> pos(ps, std::vector<double>(d));
    std::vector<std::vector<double>> vel(ps, std::vector<double>(d));
    std::vector<std::vector<double>> pbest(ps);
    std::vector<double> pbest_fit(ps);

    std::vector<double> gbest;
    double gbest_fit = std::numeric_limits<double>::infinity();

    for (std::size_t p = 0; p < ps; ++p) {
        for (std::size_t j = 0; j < d; ++j) pos[p][j] = rng.uniform(config.p_min, config.p_max);
        for (std::size_t j = 0; j < d; ++j) vel[p][j] = rng.uniform(config.v_min, config.v_max);
        pbest[p] = pos[p];
        pbest_fit[p] = objective(pos[p]);
        if (pbest_fit[p] < gbest_fit) {
            gbest_fit = pbest_fit[p];
            gbest = pos[p];
        }
    }

    SwarmResult result;
    int stalled = 0;
    for (int iter = 1; iter <= config.i_max; ++iter) {
        const double c = inertia(iter, config);
        const double before = gbest_fit;

        for (std::size_t p = 0; p < ps; ++p) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            for (std::size_t j = 0; j < d; ++j) {
                double v = c * vel[p][j] + r1 * config.c1 * (pbest[p][j] - pos[p][j]) +
                           r2 * config.c2 * (gbest[j] - pos[p][j]);
                v = std::clamp(v, config.v_min, config.v_max);
                vel[p][j] = v;
                pos[p][j] = std::clamp(pos[p][j] + v, config.p_min, config.p_max);
            }
            if (rng.uniform() < config.amp) {
                const auto j = static_cast<std::size_t>(rng.integer(static_cast<std::uint64_t>(dim)));
                pos[p][j] = rng.uniform(config.p_min, config.p_max);
            }
            const double fit = objective(pos[p]);
            if (fit < pbest_fit[p]) {
                pbest_fit[p] = fit;
                pbest[p] = pos[p];
            }
        }

        // Group best advances at the iteration barrier.
        for (std::size_t p = 0; p < ps; ++p) {
            if (pbest_fit[p] < gbest_fit) {
                gbest_fit = pbest_fit[p];
                gbest = pbest[p];
            }
        }

        result.trace.push_back(gbest_fit);
        result.iterations = iter;

        stalled = before - gbest_fit < config.stall_tol ? stalled + 1 : 0;
        if (stalled >= config.stall_patience) break;
    }

    result.best_position = std::move(gbest);
    result.best_fitness = gbest_fit;
    return result;
}

TrainedNetwork pso_train(const std::vector<TrainingSample>& samples,
                         const NetworkShape& shape, const SwarmConfig& config) {
    shape.validate();
    if (samples.empty()) throw DomainError("pso_train: no training samples");
    for (const TrainingSample& s : samples) {
        if (static_cast<int>(s.input.size()) != shape.k) {
            throw DimensionError("pso_train: sample input width != k");
        }
    }

    const Objective objective = [&samples, &shape](const std::vector<double>& x) {
        return fitness_rmse(x, samples, shape);
    };
    SwarmResult swarm = pso_minimize(objective, shape.param_count(), config);

    TrainedNetwork trained;
    trained.shape = shape;
    trained.params = decode(swarm.best_position, shape);
    trained.fitness = swarm.best_fitness;
    trained.trace = std::move(swarm.trace);
    return trained;
}

} // namespace qf
