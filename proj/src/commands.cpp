#include "quantfusion/commands.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/ic.hpp"
#include "quantfusion/metrics.hpp"
#include "quantfusion/preprocess.hpp"
#include "quantfusion/ranking.hpp"
#include "quantfusion/regime.hpp"
#include "quantfusion/rng.hpp"
#include "quantfusion/svg.hpp"
#include "quantfusion/synthetic.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace qf {

namespace {

// Stream offsets off the global seed, one per randomized component, so
// changing one component's draws never perturbs a sibling's.
constexpr std::uint64_t kSynthStream = 1;
constexpr std::uint64_t kPickerStream = 2;
constexpr std::uint64_t kRegimeStream = 3;
constexpr std::uint64_t kBacktestStream = 4;

std::filesystem::path ensure_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    return dir;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

SyntheticSpec resolved_synthetic_spec(const RunConfig& config) {
    SyntheticSpec spec = config.synthetic;
    if (!config.synthetic_seed_set) spec.seed = derive_seed(config.seed, kSynthStream);
    return spec;
}

FactorPanel standardized_panel(const SimulationData& market) {
    if (market.factors.stage == PanelStage::standardized) return market.factors;
    std::vector<std::string> warnings;
    FactorPanel panel = preprocess_panel(market.factors, &warnings);
    print_warnings(warnings);
    return panel;
}

BarSeries slice_bars(const BarSeries& series, const DateRange& window) {
    BarSeries out;
    out.id = series.id;
    for (const auto& bar : series.bars)
        if (!(bar.date < window.begin) && !(window.end < bar.date)) out.bars.push_back(bar);
    return out;
}

// Trailing window of `count` trading days whose every sample still has a
// next-day return inside the data: ends at the second-to-last day.
DateRange default_picker_range(const BarSeries& index, int count) {
    std::size_t n = index.bars.size();
    std::size_t need = static_cast<std::size_t>(count) + 1;
    if (n < need + 1)
        throw InsufficientDataError("index history is shorter than the picker window");
    return DateRange{index.bars[n - 1 - static_cast<std::size_t>(count)].date,
                     index.bars[n - 2].date};
}

std::string cell(double value, bool defined) {
    if (!defined) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

// period -> field -> value. Only cells that are actually present.
using MetricsCells = std::map<std::string, std::map<std::string, double>>;

// The report may compare documents written by other tools, so it reads
// them tolerantly: an absent or null field renders as n/a instead of
// failing the whole table. Structural problems still fail.
MetricsCells load_metrics_cells(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("periods") || !doc.at("periods").is_object())
        throw ParseError(path + ": expected an object with a 'periods' object");
    MetricsCells cells;
    for (const auto& [period, fields] : doc.at("periods").items()) {
        if (!fields.is_object())
            throw ParseError(path + ": period '" + period + "' is not an object");
        auto& row = cells[period];
        for (const auto& [field, value] : fields.items()) {
            if (value.is_null()) continue;
            if (!value.is_number())
                throw ParseError(path + ": field '" + field + "' in period '" + period +
                                 "' is not a number");
            row[field] = value.get<double>();
        }
    }
    return cells;
}

} // namespace

SimulationData load_market(const RunConfig& config) {
    if (config.data.present()) {
        SimulationData data;
        data.index = load_index_bars(config.data.index);
        data.stocks = load_stock_bars(config.data.stocks);
        data.factors = load_factor_panel(config.data.factors);
        return data;
    }
    SyntheticMarket market = generate_synthetic(resolved_synthetic_spec(config));
    return SimulationData{std::move(market.index), std::move(market.stocks),
                          std::move(market.factors)};
}

void cmd_synth(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SyntheticMarket market = generate_synthetic(resolved_synthetic_spec(config));

    write_index_bars((out / "index.csv").string(), market.index);
    write_stock_bars((out / "stocks.csv").string(), market.stocks);
    write_factor_panel((out / "factors.csv").string(), market.factors);

    std::string path = (out / "true_regimes.csv").string();
    std::ofstream regimes(path);
    if (!regimes) throw IoError("cannot open " + path + " for writing");
    regimes << "date,regime\n";
    for (std::size_t i = 0; i < market.index.bars.size(); ++i)
        regimes << market.index.bars[i].date.to_string() << ','
                << market.true_regimes[i] << "\n";
    if (!regimes.good()) throw IoError("failed writing " + path);
}

void cmd_preprocess(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SimulationData market = load_market(config);
    FactorPanel panel = standardized_panel(market);
    write_factor_panel((out / "factors_standardized.csv").string(), panel);
}

void cmd_ic(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SimulationData market = load_market(config);
    FactorPanel panel = standardized_panel(market);
    ICReport report =
        compute_ic_any(panel, market.index, market.stocks, config.ic_mode, config.ic_top_k);
    write_ic_report((out / "ic_report.csv").string(), report);
}

void cmd_train_picker(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SimulationData market = load_market(config);
    FactorPanel panel = standardized_panel(market);

    DateRange range = config.has_picker_range
                          ? config.picker_range
                          : default_picker_range(market.index,
                                                 config.trade.picker_train_window);
    SwarmConfig swarm = config.swarm;
    swarm.seed = derive_seed(config.seed, kPickerStream);
    PickerModel model = train_picker(panel, market.stocks, market.index, range,
                                     config.factor_count, config.shape, swarm,
                                     config.ic_mode);
    save_picker_model((out / "picker_model.json").string(), model);
}

void cmd_train_regime(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SimulationData market = load_market(config);
    if (market.index.bars.empty()) throw EmptyPanelError("index series is empty");

    DateRange window = config.regime_window;
    if (!config.has_regime_window) {
        const Date& last = market.index.bars.back().date;
        window = DateRange{add_months(last, -config.trade.regime_train_window_months),
                           last};
    }
    BaumWelchConfig bw = config.regime;
    bw.seed = derive_seed(config.seed, kRegimeStream);
    std::vector<std::string> warnings;
    RegimeModel model = train_regime(market.index, window, bw, &warnings);
    print_warnings(warnings);

    save_regime_model((out / "regime_model.json").string(), model);
    DecodedPath path = decode_states(model, slice_bars(market.index, window));
    write_state_path((out / "regime_states.csv").string(), path.dates, path.states,
                     model.ranking);
}

void cmd_backtest(const RunConfig& config) {
    auto out = ensure_out_dir(config.out_dir);
    SimulationData market = load_market(config);

    BacktestConfig bt;
    bt.trade = config.trade;
    bt.shape = config.shape;
    bt.swarm = config.swarm;
    bt.regime = config.regime;
    bt.factor_count = config.factor_count;
    bt.ic_mode = config.ic_mode;
    bt.timing_override = config.timing_override;
    bt.risk_free_rate = config.risk_free_rate;
    bt.seed = derive_seed(config.seed, kBacktestStream);
    bt.sim_range = config.has_sim_range ? config.sim_range
                                        : default_sim_range(market.index, config.trade);

    BacktestResult result = run_backtest(market, bt);
    print_warnings(result.warnings);

    write_equity((out / "equity.csv").string(), result.curve);
    write_fills((out / "fills.csv").string(), result.fills);
    write_metrics((out / "metrics.json").string(), result.metrics);
    write_equity_svg((out / "equity.svg").string(), result.curve);
}

void cmd_report(const std::vector<std::string>& metrics_paths, const std::string& out_dir) {
    if (metrics_paths.empty())
        throw ValidationError("report needs at least one metrics file");
    auto out = ensure_out_dir(out_dir);

    // Column per input, named by file stem, ordered by name. Duplicate
    // stems get a numeric suffix so every column stays addressable.
    std::vector<std::pair<std::string, MetricsCells>> strategies;
    std::set<std::string> taken;
    for (const auto& path : metrics_paths) {
        std::string name = std::filesystem::path(path).stem().string();
        std::string unique = name;
        for (int suffix = 2; taken.count(unique) != 0; ++suffix)
            unique = name + "-" + std::to_string(suffix);
        taken.insert(unique);
        strategies.emplace_back(unique, load_metrics_cells(path));
    }
    std::sort(strategies.begin(), strategies.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Union of periods: years ascending, then overall.
    std::set<std::string> years;
    bool any_overall = false;
    for (const auto& [name, cells] : strategies) {
        for (const auto& [period, fields] : cells) {
            if (period == "overall")
                any_overall = true;
            else
                years.insert(period);
        }
    }
    std::vector<std::string> periods(years.begin(), years.end());
    if (any_overall) periods.push_back("overall");

    static const char* kFields[] = {
        "annualized_return", "alpha",             "beta",         "sharpe",
        "volatility",        "information_ratio", "max_drawdown", "turnover",
    };

    auto find_cell = [](const MetricsCells& cells, const std::string& period,
                        const std::string& field) {
        auto p = cells.find(period);
        if (p == cells.end()) return std::string("n/a");
        auto f = p->second.find(field);
        if (f == p->second.end()) return std::string("n/a");
        return cell(f->second, true);
    };

    std::string csv_path = (out / "report.csv").string();
    std::ofstream csv(csv_path);
    if (!csv) throw IoError("cannot open " + csv_path + " for writing");
    csv << "period,metric";
    for (const auto& [name, report] : strategies) csv << ',' << name;
    csv << "\n";

    std::string txt_path = (out / "report.txt").string();
    std::ofstream txt(txt_path);
    if (!txt) throw IoError("cannot open " + txt_path + " for writing");

    std::size_t label_width = 18; // longest metric name
    std::size_t col_width = 12;
    for (const auto& [name, report] : strategies)
        col_width = std::max(col_width, name.size() + 2);
    auto pad_left = [](const std::string& s, std::size_t width) {
        return (s.size() >= width ? std::string(" ") : std::string(width - s.size(), ' ')) + s;
    };

    for (const auto& period : periods) {
        txt << period << "\n";
        txt << std::string(label_width, ' ');
        for (const auto& [name, report] : strategies) txt << pad_left(name, col_width);
        txt << "\n";
        for (const char* field : kFields) {
            csv << period << ',' << field;
            std::string label(field);
            label.resize(std::max(label_width, label.size()), ' ');
            txt << label;
            for (const auto& [name, cells] : strategies) {
                std::string value = find_cell(cells, period, field);
                csv << ',' << value;
                txt << pad_left(value, col_width);
            }
            csv << "\n";
            txt << "\n";
        }
        txt << "\n";
    }
    if (!csv.good()) throw IoError("failed writing " + csv_path);
    if (!txt.good()) throw IoError("failed writing " + txt_path);
}

} // namespace qf
