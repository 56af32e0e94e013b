#pragma once

#include "quantfusion/hmm.hpp"
#include "quantfusion/hyper.hpp"
#include "quantfusion/portfolio.hpp"
#include "quantfusion/pso.hpp"
#include "quantfusion/simulation.hpp"
#include "quantfusion/synthetic.hpp"

#include <cstdint>
#include <string>

namespace qf {

/// Market data files. Either all three paths are set or none are; in the
/// latter case commands fall back to the config's synthetic spec.
struct DataPaths {
    std::string index;
    std::string stocks;
    std::string factors;

    [[nodiscard]] bool present() const {
        return !index.empty() && !stocks.empty() && !factors.empty();
    }
};

/// One JSON document drives every command. Each embedded config keeps
/// its own defaults, so an empty document is a complete valid run; the
/// seed defaults to a constant so nothing ever draws from the clock.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string out_dir = "out";

    DataPaths data;
    SyntheticSpec synthetic;
    // When the document sets synthetic.seed explicitly it wins; otherwise
    // commands derive one from the global seed.
    bool synthetic_seed_set = false;

    ICMode ic_mode = ICMode::stock_next_day;
    int ic_top_k = 6;

    NetworkShape shape;
    SwarmConfig swarm;
    BaumWelchConfig regime;
    TradeParams trade;

    int factor_count = 6;
    double risk_free_rate = 0.03;
    TimingOverride timing_override = TimingOverride::none;

    bool has_sim_range = false;
    DateRange sim_range;
    bool has_picker_range = false;
    DateRange picker_range;
    bool has_regime_window = false;
    DateRange regime_window;

    void validate() const;
};

/// Parses the JSON document, filling defaults for absent fields. Throws
/// ParseError on malformed JSON or wrong field types and ValidationError
/// when an embedded config rejects its values.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const std::string& text);

} // namespace qf
