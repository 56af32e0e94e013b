#include "quantfusion/hmm.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qf {

namespace {

constexpr double kStochasticTol = 1e-10;
constexpr double kLogTwoPi = 1.8378770664093454836;

void check_obs(const std::vector<std::vector<double>>& obs) {
    if (obs.empty()) throw EmptyPanelError("hmm: empty observation set");
    const std::size_t dim = obs[0].size();
    if (dim == 0) throw DimensionError("hmm: zero-width observations");
    for (const auto& row : obs) {
        if (row.size() != dim) throw DimensionError("hmm: ragged observation rows");
        for (double v : row) {
            if (!std::isfinite(v)) throw DomainError("hmm: non-finite observation");
        }
    }
}

// Log emission matrix L[t][j] plus the per-step max used for scaling.
struct EmissionTable {
    std::vector<std::vector<double>> log_emit; // T x N
    std::vector<double> shift;                 // per-step max over states
    std::vector<std::vector<double>> scaled;   // exp(log_emit - shift), in (0, 1]
};

EmissionTable emission_table(const MGHMMParams& params,
                             const std::vector<std::vector<double>>& obs) {
    const std::size_t t_len = obs.size();
    const auto n = static_cast<std::size_t>(params.num_states());
    EmissionTable table;
    table.log_emit.assign(t_len, std::vector<double>(n));
    table.shift.assign(t_len, 0.0);
    table.scaled.assign(t_len, std::vector<double>(n));
    for (std::size_t t = 0; t < t_len; ++t) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            table.log_emit[t][j] = log_emission(params, static_cast<int>(j), obs[t]);
            m = std::max(m, table.log_emit[t][j]);
        }
        table.shift[t] = m;
        for (std::size_t j = 0; j < n; ++j) {
            table.scaled[t][j] = std::exp(table.log_emit[t][j] - m);
        }
    }
    return table;
}

} // namespace

void MGHMMParams::validate() const {
    const std::size_t n = pi.size();
    if (n == 0) throw ValidationError("hmm params: no states");
    if (trans.size() != n || means.size() != n || covs.size() != n) {
        throw DimensionError("hmm params: state-count mismatch across fields");
    }
    const std::size_t dim = means[0].size();
    if (dim == 0) throw DimensionError("hmm params: zero-width means");

    double pi_sum = 0.0;
    for (double p : pi) {
        if (p < 0) throw DomainError("hmm params: negative initial probability");
        pi_sum += p;
    }
    if (std::abs(pi_sum - 1.0) > kStochasticTol) {
        throw ValidationError("hmm params: pi does not sum to 1");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (trans[i].size() != n) throw DimensionError("hmm params: trans is not N x N");
        if (means[i].size() != dim || covs[i].size() != dim) {
            throw DimensionError("hmm params: mean/cov width mismatch");
        }
        double row_sum = 0.0;
        for (double a : trans[i]) {
            if (a < 0) throw DomainError("hmm params: negative transition probability");
            row_sum += a;
        }
        if (std::abs(row_sum - 1.0) > kStochasticTol) {
            throw ValidationError("hmm params: transition row " + std::to_string(i) +
                                  " does not sum to 1");
        }
        for (double v : covs[i]) {
            if (!(v > 0)) throw DomainError("hmm params: non-positive variance");
        }
    }
}

double log_emission(const MGHMMParams& params, int state, const std::vector<double>& obs) {
    const auto j = static_cast<std::size_t>(state);
    if (state < 0 || j >= params.means.size()) {
        throw DimensionError("log_emission: state index out of range");
    }
    const auto& mu = params.means[j];
    const auto& var = params.covs[j];
    if (obs.size() != mu.size()) throw DimensionError("log_emission: observation width");
    double ll = 0.0;
    for (std::size_t d = 0; d < obs.size(); ++d) {
        const double diff = obs[d] - mu[d];
        ll += kLogTwoPi + std::log(var[d]) + diff * diff / var[d];
    }
    return -0.5 * ll;
}

ForwardBackwardResult forward_backward(const MGHMMParams& params,
                                       const std::vector<std::vector<double>>& obs) {
    params.validate();
    check_obs(obs);
    if (obs[0].size() != static_cast<std::size_t>(params.obs_dim())) {
        throw DimensionError("forward_backward: observation width != model dimension");
    }
    const std::size_t t_len = obs.size();
    if (t_len < 2) throw InsufficientDataError("forward_backward: need at least 2 observations");
    const auto n = static_cast<std::size_t>(params.num_states());

    const EmissionTable em = emission_table(params, obs);

    // Scaled forward pass: alpha rows normalized to sum 1, the
    // normalizers c[t] carry the likelihood.
    std::vector<std::vector<double>> alpha(t_len, std::vector<double>(n));
    std::vector<double> c(t_len);
    for (std::size_t j = 0; j < n; ++j) alpha[0][j] = params.pi[j] * em.scaled[0][j];
    c[0] = 0.0;
    for (double v : alpha[0]) c[0] += v;
    if (!(c[0] > 0)) throw DomainError("forward_backward: zero-probability start");
    for (double& v : alpha[0]) v /= c[0];

    for (std::size_t t = 1; t < t_len; ++t) {
        c[t] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += alpha[t - 1][i] * params.trans[i][j];
            alpha[t][j] = s * em.scaled[t][j];
            c[t] += alpha[t][j];
        }
        if (!(c[t] > 0)) {
            throw DomainError("forward_backward: zero-probability observation at step " +
                              std::to_string(t));
        }
        for (double& v : alpha[t]) v /= c[t];
    }

    // Backward pass scaled by the same normalizers.
    std::vector<std::vector<double>> beta(t_len, std::vector<double>(n, 1.0));
    for (std::size_t t = t_len - 1; t-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += params.trans[i][j] * em.scaled[t + 1][j] * beta[t + 1][j];
            }
            beta[t][i] = s / c[t + 1];
        }
    }

    ForwardBackwardResult result;
    result.log_likelihood = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        result.log_likelihood += std::log(c[t]) + em.shift[t];
    }

    result.gamma.assign(t_len, std::vector<double>(n));
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n; ++i) result.gamma[t][i] = alpha[t][i] * beta[t][i];
    }

    result.xi.assign(t_len - 1, std::vector<std::vector<double>>(n, std::vector<double>(n)));
    for (std::size_t t = 0; t + 1 < t_len; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                result.xi[t][i][j] = alpha[t][i] * params.trans[i][j] *
                                     em.scaled[t + 1][j] * beta[t + 1][j] / c[t + 1];
            }
        }
    }
    return result;
}

void BaumWelchConfig::validate() const {
    if (num_states < 1) throw DomainError("baum_welch: num_states must be >= 1");
    if (tol < 0) throw DomainError("baum_welch: tol must be >= 0");
    if (max_iter < 1) throw DomainError("baum_welch: max_iter must be >= 1");
    if (restarts < 1) throw DomainError("baum_welch: restarts must be >= 1");
    if (!(cov_floor > 0)) throw DomainError("baum_welch: cov_floor must be > 0");
    if (self_transition <= 0 || self_transition >= 1) {
        throw DomainError("baum_welch: self_transition must lie in (0, 1)");
    }
}

namespace {

// Lloyd's k-means on the observation rows, seeded centers drawn from
// distinct data points. Returns per-cluster means and variances.
struct KMeansResult {
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> vars;
};

KMeansResult kmeans(const std::vector<std::vector<double>>& obs, int k, Rng& rng,
                    double var_floor) {
    const std::size_t t_len = obs.size();
    const std::size_t dim = obs[0].size();
    const auto kk = static_cast<std::size_t>(k);

    // distinct starting rows
    std::vector<std::size_t> order(t_len);
    for (std::size_t i = 0; i < t_len; ++i) order[i] = i;
    for (std::size_t i = 0; i < kk; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.integer(t_len - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::vector<double>> centers(kk);
    for (std::size_t i = 0; i < kk; ++i) centers[i] = obs[order[i]];

    std::vector<std::size_t> assign(t_len, 0);
    for (int round = 0; round < 50; ++round) {
        bool moved = false;
        for (std::size_t t = 0; t < t_len; ++t) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t cidx = 0; cidx < kk; ++cidx) {
                double d2 = 0.0;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = obs[t][d] - centers[cidx][d];
                    d2 += diff * diff;
                }
                if (d2 < best) {
                    best = d2;
                    arg = cidx;
                }
            }
            if (assign[t] != arg) {
                assign[t] = arg;
                moved = true;
            }
        }
        std::vector<std::vector<double>> sums(kk, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(kk, 0);
        for (std::size_t t = 0; t < t_len; ++t) {
            ++counts[assign[t]];
            for (std::size_t d = 0; d < dim; ++d) sums[assign[t]][d] += obs[t][d];
        }
        for (std::size_t cidx = 0; cidx < kk; ++cidx) {
            if (counts[cidx] == 0) {
                // dead cluster: reseed on a random row
                centers[cidx] = obs[static_cast<std::size_t>(rng.integer(t_len))];
                moved = true;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                centers[cidx][d] = sums[cidx][d] / static_cast<double>(counts[cidx]);
            }
        }
        if (!moved && round > 0) break;
    }

    KMeansResult result;
    result.means = centers;
    result.vars.assign(kk, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t t = 0; t < t_len; ++t) {
        ++counts[assign[t]];
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = obs[t][d] - centers[assign[t]][d];
            result.vars[assign[t]][d] += diff * diff;
        }
    }
    for (std::size_t cidx = 0; cidx < kk; ++cidx) {
        for (std::size_t d = 0; d < dim; ++d) {
            if (counts[cidx] > 0) result.vars[cidx][d] /= static_cast<double>(counts[cidx]);
            result.vars[cidx][d] = std::max(result.vars[cidx][d], var_floor);
        }
    }
    return result;
}

MGHMMParams initial_params(const std::vector<std::vector<double>>& obs,
                           const BaumWelchConfig& config, Rng& rng) {
    const auto n = static_cast<std::size_t>(config.num_states);
    MGHMMParams params;
    params.pi.assign(n, 1.0 / static_cast<double>(n));
    params.trans.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            params.trans[i][j] = n == 1          ? 1.0
                                 : i == j        ? config.self_transition
                                                 : (1.0 - config.self_transition) /
                                                       static_cast<double>(n - 1);
        }
    }
    KMeansResult km = kmeans(obs, config.num_states, rng, config.cov_floor);
    params.means = std::move(km.means);
    params.covs = std::move(km.vars);
    return params;
}

FittedHMM em_fit(const std::vector<std::vector<double>>& obs, const BaumWelchConfig& config,
                 MGHMMParams params) {
    const std::size_t t_len = obs.size();
    const auto n = static_cast<std::size_t>(config.num_states);
    const std::size_t dim = obs[0].size();

    FittedHMM fit;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < config.max_iter; ++iter) {
        const ForwardBackwardResult fb = forward_backward(params, obs);
        fit.trace.push_back(fb.log_likelihood);
        if (fb.log_likelihood - prev_ll < config.tol && iter > 0) break;
        prev_ll = fb.log_likelihood;

        // M-step
        MGHMMParams next = params;
        double pi_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) pi_sum += fb.gamma[0][i];
        for (std::size_t i = 0; i < n; ++i) next.pi[i] = fb.gamma[0][i] / pi_sum;

        for (std::size_t i = 0; i < n; ++i) {
            double occupancy = 0.0;
            for (std::size_t t = 0; t + 1 < t_len; ++t) occupancy += fb.gamma[t][i];
            if (occupancy > 0) {
                double row_sum = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    double num = 0.0;
                    for (std::size_t t = 0; t + 1 < t_len; ++t) num += fb.xi[t][i][j];
                    next.trans[i][j] = num;
                    row_sum += num;
                }
                for (std::size_t j = 0; j < n; ++j) next.trans[i][j] /= row_sum;
            }

            double weight = occupancy + fb.gamma[t_len - 1][i];
            if (weight > 0) {
                std::vector<double> mu(dim, 0.0);
                for (std::size_t t = 0; t < t_len; ++t) {
                    for (std::size_t d = 0; d < dim; ++d) mu[d] += fb.gamma[t][i] * obs[t][d];
                }
                for (std::size_t d = 0; d < dim; ++d) mu[d] /= weight;
                std::vector<double> var(dim, 0.0);
                for (std::size_t t = 0; t < t_len; ++t) {
                    for (std::size_t d = 0; d < dim; ++d) {
                        const double diff = obs[t][d] - mu[d];
                        var[d] += fb.gamma[t][i] * diff * diff;
                    }
                }
                for (std::size_t d = 0; d < dim; ++d) {
                    var[d] = std::max(var[d] / weight, config.cov_floor);
                }
                next.means[i] = std::move(mu);
                next.covs[i] = std::move(var);
            }
        }
        params = std::move(next);
    }

    fit.params = std::move(params);
    fit.log_likelihood = fit.trace.back();
    return fit;
}

} // namespace

FittedHMM baum_welch(const std::vector<std::vector<double>>& obs, const BaumWelchConfig& config) {
    config.validate();
    check_obs(obs);
    if (obs.size() < 10 * static_cast<std::size_t>(config.num_states)) {
        throw InsufficientDataError("baum_welch: need at least 10 observations per state");
    }

    FittedHMM best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        FittedHMM fit = em_fit(obs, config, initial_params(obs, config, rng));
        if (fit.log_likelihood > best.log_likelihood) best = std::move(fit);
    }
    return best;
}

std::vector<int> viterbi(const MGHMMParams& params, const std::vector<std::vector<double>>& obs) {
    params.validate();
    check_obs(obs);
    if (obs[0].size() != static_cast<std::size_t>(params.obs_dim())) {
        throw DimensionError("viterbi: observation width != model dimension");
    }
    const std::size_t t_len = obs.size();
    const auto n = static_cast<std::size_t>(params.num_states());
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> log_trans(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            log_trans[i][j] = params.trans[i][j] > 0 ? std::log(params.trans[i][j]) : neg_inf;
        }
    }

    std::vector<std::vector<double>> delta(t_len, std::vector<double>(n));
    std::vector<std::vector<std::size_t>> back(t_len, std::vector<std::size_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        delta[0][j] = (params.pi[j] > 0 ? std::log(params.pi[j]) : neg_inf) +
                      log_emission(params, static_cast<int>(j), obs[0]);
    }
    for (std::size_t t = 1; t < t_len; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            double best = neg_inf;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double cand = delta[t - 1][i] + log_trans[i][j];
                if (cand > best) { // strict: ties keep the lower index
                    best = cand;
                    arg = i;
                }
            }
            delta[t][j] = best + log_emission(params, static_cast<int>(j), obs[t]);
            back[t][j] = arg;
        }
    }

    std::size_t state = 0;
    double best = neg_inf;
    for (std::size_t j = 0; j < n; ++j) {
        if (delta[t_len - 1][j] > best) {
            best = delta[t_len - 1][j];
            state = j;
        }
    }
    if (best == neg_inf) throw DomainError("viterbi: no path has positive probability");

    std::vector<int> path(t_len);
    for (std::size_t t = t_len; t-- > 0;) {
        path[t] = static_cast<int>(state);
        if (t > 0) state = back[t][state];
    }
    return path;
}

} // namespace qf
