#pragma once

#include "quantfusion/bars.hpp"
#include "quantfusion/panel.hpp"

#include <cstdint>
#include <vector>

namespace qf {

// One market state of the generator's Markov chain. mean_duration maps to a
// self-transition probability of 1 - 1/mean_duration (geometric holding
// time). Volatility 0 is allowed and produces flat index bars.
struct RegimeSpec {
    double drift = 0.0;      // per-day log-return drift of the index
    double vol = 0.01;       // per-day log-return standard deviation
    double mean_duration = 20.0;
};

struct SyntheticSpec {
    std::uint64_t seed = 42;
    std::vector<RegimeSpec> regimes;
    int num_stocks = 20;
    int num_days = 500;
    int num_factors = 8;
    // The first num_signal_factors factor columns are planted as
    // signal_strength * (next-day stock return / idio_vol) + unit noise;
    // the rest are pure noise. Strength 1.0 gives roughly 0.7 correlation
    // with the next-day stock return.
    int num_signal_factors = 2;
    double signal_strength = 1.0;
    double idio_vol = 0.015;  // per-stock daily idiosyncratic volatility
    int num_industries = 4;
    double null_rate = 0.0;   // probability a raw factor cell is left null
    Date start_date{2015, 1, 5};
};

struct SyntheticMarket {
    BarSeries index;
    std::vector<BarSeries> stocks;
    FactorPanel factors;          // raw stage
    std::vector<int> true_regimes; // regime index per trading day
};

// Deterministic for a fixed spec. Trading days are consecutive weekdays
// starting at spec.start_date. The true regime path is returned so tests
// can grade state recovery against the generator's own chain.
SyntheticMarket generate_synthetic(const SyntheticSpec& spec);

} // namespace qf
