#include "quantfusion/config.hpp"

#include "quantfusion/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qf {

namespace {

using nlohmann::json;

// Rejects misspelled keys instead of silently ignoring them; a config
// typo should fail loudly, not fall back to a default.
void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.count(it.key()) == 0)
            throw ParseError("unknown config key '" + it.key() + "' in " + context);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("config field '") + key + "' has the wrong type");
    }
}

void read_date(const json& obj, const char* key, Date& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string())
        throw ParseError(std::string("config field '") + key + "' must be a date string");
    out = parse_date(it->get<std::string>());
}

bool read_range(const json& parent, const char* key, DateRange& out) {
    auto it = parent.find(key);
    if (it == parent.end()) return false;
    check_keys(*it, {"begin", "end"}, key);
    bool have_begin = it->contains("begin"), have_end = it->contains("end");
    if (!have_begin || !have_end)
        throw ParseError(std::string(key) + " needs both begin and end dates");
    read_date(*it, "begin", out.begin);
    read_date(*it, "end", out.end);
    if (out.end < out.begin)
        throw ParseError(std::string(key) + " has end before begin");
    return true;
}

void parse_data(const json& obj, DataPaths& data) {
    check_keys(obj, {"index", "stocks", "factors"}, "data");
    read(obj, "index", data.index);
    read(obj, "stocks", data.stocks);
    read(obj, "factors", data.factors);
    bool any = !data.index.empty() || !data.stocks.empty() || !data.factors.empty();
    if (any && !data.present())
        throw ParseError("data block needs all of index, stocks, and factors paths");
}

void parse_synthetic(const json& obj, RunConfig& config) {
    check_keys(obj,
               {"seed", "regimes", "num_stocks", "num_days", "num_factors",
                "num_signal_factors", "signal_strength", "idio_vol", "num_industries",
                "null_rate", "start_date"},
               "synthetic");
    SyntheticSpec& spec = config.synthetic;
    if (obj.contains("seed")) {
        read(obj, "seed", spec.seed);
        config.synthetic_seed_set = true;
    }
    if (obj.contains("regimes")) {
        const json& arr = obj.at("regimes");
        if (!arr.is_array()) throw ParseError("synthetic.regimes must be an array");
        spec.regimes.clear();
        for (const auto& r : arr) {
            check_keys(r, {"drift", "vol", "mean_duration"}, "synthetic.regimes");
            RegimeSpec rs;
            read(r, "drift", rs.drift);
            read(r, "vol", rs.vol);
            read(r, "mean_duration", rs.mean_duration);
            spec.regimes.push_back(rs);
        }
    }
    read(obj, "num_stocks", spec.num_stocks);
    read(obj, "num_days", spec.num_days);
    read(obj, "num_factors", spec.num_factors);
    read(obj, "num_signal_factors", spec.num_signal_factors);
    read(obj, "signal_strength", spec.signal_strength);
    read(obj, "idio_vol", spec.idio_vol);
    read(obj, "num_industries", spec.num_industries);
    read(obj, "null_rate", spec.null_rate);
    read_date(obj, "start_date", spec.start_date);
}

void parse_ic(const json& obj, RunConfig& config) {
    check_keys(obj, {"mode", "top_k"}, "ic");
    if (obj.contains("mode")) {
        std::string mode;
        read(obj, "mode", mode);
        if (mode == "stock")
            config.ic_mode = ICMode::stock_next_day;
        else if (mode == "index")
            config.ic_mode = ICMode::index_next_day;
        else
            throw ParseError("ic.mode must be 'stock' or 'index', got '" + mode + "'");
    }
    read(obj, "top_k", config.ic_top_k);
}

void parse_network(const json& obj, NetworkShape& shape) {
    check_keys(obj, {"input_nodes", "hidden_nodes", "steepness"}, "network");
    read(obj, "input_nodes", shape.k);
    read(obj, "hidden_nodes", shape.n);
    read(obj, "steepness", shape.a);
}

void parse_swarm(const json& obj, SwarmConfig& swarm) {
    check_keys(obj,
               {"c1", "c2", "w_max", "w_min", "i_max", "ps", "p_max", "p_min", "v_max",
                "v_min", "amp", "inertia", "stall_patience", "stall_tol"},
               "swarm");
    read(obj, "c1", swarm.c1);
    read(obj, "c2", swarm.c2);
    read(obj, "w_max", swarm.w_max);
    read(obj, "w_min", swarm.w_min);
    read(obj, "i_max", swarm.i_max);
    read(obj, "ps", swarm.ps);
    read(obj, "p_max", swarm.p_max);
    read(obj, "p_min", swarm.p_min);
    read(obj, "v_max", swarm.v_max);
    read(obj, "v_min", swarm.v_min);
    read(obj, "amp", swarm.amp);
    read(obj, "stall_patience", swarm.stall_patience);
    read(obj, "stall_tol", swarm.stall_tol);
    if (obj.contains("inertia")) {
        std::string mode;
        read(obj, "inertia", mode);
        if (mode == "linear")
            swarm.inertia_mode = InertiaMode::linear_decay;
        else if (mode == "paper")
            swarm.inertia_mode = InertiaMode::paper_literal;
        else
            throw ParseError("swarm.inertia must be 'linear' or 'paper', got '" + mode +
                             "'");
    }
}

void parse_regime(const json& obj, BaumWelchConfig& regime) {
    check_keys(obj,
               {"states", "restarts", "tol", "max_iter", "cov_floor", "self_transition"},
               "regime");
    read(obj, "states", regime.num_states);
    read(obj, "restarts", regime.restarts);
    read(obj, "tol", regime.tol);
    read(obj, "max_iter", regime.max_iter);
    read(obj, "cov_floor", regime.cov_floor);
    read(obj, "self_transition", regime.self_transition);
}

void parse_trade(const json& obj, TradeParams& trade) {
    check_keys(obj,
               {"initial_capital", "buy_cost", "sell_cost", "slippage", "buy_fraction",
                "sell_fraction", "n_pick", "picking_cycle", "timing_cycle",
                "training_cycle_months", "picker_train_window",
                "regime_train_window_months", "fractional_shares"},
               "trade");
    read(obj, "initial_capital", trade.initial_capital);
    read(obj, "buy_cost", trade.buy_cost);
    read(obj, "sell_cost", trade.sell_cost);
    read(obj, "slippage", trade.slippage);
    read(obj, "buy_fraction", trade.buy_fraction);
    read(obj, "sell_fraction", trade.sell_fraction);
    read(obj, "n_pick", trade.n_pick);
    read(obj, "picking_cycle", trade.picking_cycle);
    read(obj, "timing_cycle", trade.timing_cycle);
    read(obj, "training_cycle_months", trade.training_cycle_months);
    read(obj, "picker_train_window", trade.picker_train_window);
    read(obj, "regime_train_window_months", trade.regime_train_window_months);
    read(obj, "fractional_shares", trade.fractional_shares);
}

void parse_backtest(const json& obj, RunConfig& config) {
    check_keys(obj,
               {"factor_count", "risk_free_rate", "timing_override", "begin", "end"},
               "backtest");
    read(obj, "factor_count", config.factor_count);
    read(obj, "risk_free_rate", config.risk_free_rate);
    if (obj.contains("timing_override")) {
        std::string mode;
        read(obj, "timing_override", mode);
        if (mode == "none")
            config.timing_override = TimingOverride::none;
        else if (mode == "flat")
            config.timing_override = TimingOverride::force_flat;
        else if (mode == "long")
            config.timing_override = TimingOverride::force_long;
        else
            throw ParseError(
                "backtest.timing_override must be 'none', 'flat', or 'long', got '" +
                mode + "'");
    }
    bool have_begin = obj.contains("begin"), have_end = obj.contains("end");
    if (have_begin != have_end)
        throw ParseError("backtest needs both begin and end dates, or neither");
    if (have_begin) {
        read_date(obj, "begin", config.sim_range.begin);
        read_date(obj, "end", config.sim_range.end);
        if (config.sim_range.end < config.sim_range.begin)
            throw ParseError("backtest has end before begin");
        config.has_sim_range = true;
    }
}

} // namespace

void RunConfig::validate() const {
    shape.validate();
    swarm.validate();
    regime.validate();
    trade.validate();
    if (ic_top_k < 1) throw ValidationError("ic.top_k must be at least 1");
    if (factor_count < shape.k)
        throw ValidationError("backtest.factor_count must cover the network's input width");
    if (!std::isfinite(risk_free_rate))
        throw ValidationError("backtest.risk_free_rate must be finite");
}

RunConfig run_config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config document must be a JSON object");
    check_keys(doc,
               {"seed", "out_dir", "data", "synthetic", "ic", "network", "swarm",
                "regime", "trade", "backtest", "picker_train", "regime_train"},
               "the top level");

    RunConfig config;
    read(doc, "seed", config.seed);
    read(doc, "out_dir", config.out_dir);
    if (doc.contains("data")) parse_data(doc.at("data"), config.data);
    if (doc.contains("synthetic")) parse_synthetic(doc.at("synthetic"), config);
    if (doc.contains("ic")) parse_ic(doc.at("ic"), config);
    if (doc.contains("network")) parse_network(doc.at("network"), config.shape);
    if (doc.contains("swarm")) parse_swarm(doc.at("swarm"), config.swarm);
    if (doc.contains("regime")) parse_regime(doc.at("regime"), config.regime);
    if (doc.contains("trade")) parse_trade(doc.at("trade"), config.trade);
    if (doc.contains("backtest")) parse_backtest(doc.at("backtest"), config);
    config.has_picker_range = read_range(doc, "picker_train", config.picker_range);
    config.has_regime_window = read_range(doc, "regime_train", config.regime_window);

    config.validate();
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return run_config_from_json(buffer.str());
}

} // namespace qf
