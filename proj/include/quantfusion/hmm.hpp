#pragma once

#include <cstdint>
#include <vector>

namespace qf {

/// Hidden Markov model with diagonal-covariance Gaussian emissions.
struct MGHMMParams {
    std::vector<double> pi;                 // initial distribution, length N
    std::vector<std::vector<double>> trans; // N x N, rows sum to 1
    std::vector<std::vector<double>> means; // N x D
    std::vector<std::vector<double>> covs;  // N x D diagonal variances, > 0

    int num_states() const { return static_cast<int>(pi.size()); }
    int obs_dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }

    // Checks shape consistency, stochastic sums within 1e-10 and
    // positive variances. Throws ValidationError or DomainError.
    void validate() const;

    bool operator==(const MGHMMParams&) const = default;
};

/// Log density of the observation under state j's Gaussian.
double log_emission(const MGHMMParams& params, int state, const std::vector<double>& obs);

struct ForwardBackwardResult {
    double log_likelihood = 0.0;
    std::vector<std::vector<double>> gamma;            // T x N state posteriors
    std::vector<std::vector<std::vector<double>>> xi;  // (T-1) x N x N transition posteriors
};

/// Scaled forward-backward pass. Per-step normalization keeps every
/// quantity in range regardless of T; gamma rows and xi slices each sum
/// to 1. Needs T >= 2.
ForwardBackwardResult forward_backward(const MGHMMParams& params,
                                       const std::vector<std::vector<double>>& obs);

struct BaumWelchConfig {
    int num_states = 5;
    std::uint64_t seed = 0;
    double tol = 1e-6;  // stop when the log-likelihood gain drops below this
    int max_iter = 500;
    int restarts = 5;   // independent seeded initializations, best kept
    double cov_floor = 1e-6;
    double self_transition = 0.9; // initial self-transition mass

    void validate() const;
};

struct FittedHMM {
    MGHMMParams params;
    std::vector<double> trace; // log-likelihood per EM iteration, non-decreasing
    double log_likelihood = 0.0;
};

/// EM estimation. Means start from seeded k-means on the observations,
/// pi uniform, transitions self-weighted. Runs `restarts` independent
/// fits and returns the one with the highest final log-likelihood.
/// Needs T >= 10 * num_states.
FittedHMM baum_welch(const std::vector<std::vector<double>>& obs, const BaumWelchConfig& config);

/// Most probable state path in log space. Ties break toward the lower
/// state index.
std::vector<int> viterbi(const MGHMMParams& params, const std::vector<std::vector<double>>& obs);

} // namespace qf
