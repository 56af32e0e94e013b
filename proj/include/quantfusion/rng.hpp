#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qf {

// Deterministic random source. Wraps mt19937_64 but generates uniforms and
// normals by hand so streams are bit-identical across standard libraries
// (std::uniform_real_distribution and std::normal_distribution are both
// implementation defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal via Box-Muller. No caching of the second deviate, so
    // the stream position stays easy to reason about.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double stdev) {
        return mean + stdev * normal();
    }

    // Uniform integer in [0, n). Rejection-free modulo is fine here; the
    // ranges involved are tiny relative to 2^64 so bias is negligible, but
    // we reject anyway to keep the stream well defined.
    std::uint64_t integer(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = gen_();
        while (x >= limit) x = gen_();
        return x % n;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Mixes a base seed with a stream offset so components get independent
// streams from one user-facing seed. splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t offset) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (offset + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace qf
