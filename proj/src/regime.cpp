#include "quantfusion/regime.hpp"

#include "quantfusion/errors.hpp"
#include "quantfusion/observables.hpp"

#include <json.hpp>

#include <fstream>

namespace qf {

namespace {

BarSeries slice_bars(const BarSeries& series, const DateRange& window) {
    BarSeries out;
    out.id = series.id;
    for (const Bar& bar : series.bars) {
        if (range_contains(window, bar.date)) out.bars.push_back(bar);
    }
    return out;
}

} // namespace

RegimeModel train_regime(const BarSeries& index, const DateRange& window,
                         const BaumWelchConfig& config,
                         std::vector<std::string>* warnings) {
    const BarSeries bars = slice_bars(index, window);
    const ObservationSeries obs = compute_observables(bars);

    RegimeModel model;
    model.transform = boxcox_fit(obs.matrix(), warnings);
    const auto normalized = boxcox_apply(model.transform, obs.matrix());

    FittedHMM fit = baum_welch(normalized, config);
    model.params = std::move(fit.params);

    const std::vector<int> path = viterbi(model.params, normalized);

    // Observation t sits at bar t + 5; its next-day return needs bar
    // t + 6, so the final path entry has nothing to pair with.
    std::vector<double> next_returns;
    next_returns.reserve(path.size() - 1);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
        const double prev = bars.bars[t + 5].close;
        next_returns.push_back(bars.bars[t + 6].close / prev - 1.0);
    }
    const std::vector<int> head(path.begin(), path.end() - 1);
    model.ranking = rank_states(head, next_returns, config.num_states);
    return model;
}

DecodedPath decode_states(const RegimeModel& model, const BarSeries& bars) {
    const ObservationSeries obs = compute_observables(bars);

    // Fresh data can fall below the support the transform was fitted on
    // (the shift only guarantees positivity for the training window), so
    // out-of-sample values are clamped to the domain edge before the
    // power transform. Training-window data is unaffected. A width
    // mismatch is left for boxcox_apply to reject.
    std::vector<std::vector<double>> rows = obs.matrix();
    for (auto& row : rows) {
        if (row.size() != model.transform.channels.size()) break;
        for (std::size_t d = 0; d < row.size(); ++d) {
            const BoxCoxChannel& channel = model.transform.channels[d];
            if (channel.identity) continue; // pass-through accepts any value
            double floor = 1e-6 - channel.shift;
            if (row[d] < floor) row[d] = floor;
        }
    }

    DecodedPath decoded;
    decoded.dates = obs.dates;
    decoded.states = viterbi(model.params, boxcox_apply(model.transform, rows));
    return decoded;
}

void save_regime_model(const std::string& path, const RegimeModel& model) {
    nlohmann::json doc;
    for (const BoxCoxChannel& c : model.transform.channels) {
        doc["boxcox"].push_back({{"lambda", c.lambda},
                                 {"shift", c.shift},
                                 {"mean", c.mean},
                                 {"stdev", c.stdev},
                                 {"identity", c.identity}});
    }
    doc["hmm"] = {{"pi", model.params.pi},
                  {"trans", model.params.trans},
                  {"means", model.params.means},
                  {"covs", model.params.covs}};
    doc["ranking"] = {{"totals", model.ranking.totals},
                      {"ranks", model.ranking.ranks},
                      {"top_two", model.ranking.top_two}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
}

RegimeModel load_regime_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        nlohmann::json doc;
        in >> doc;
        RegimeModel model;
        for (const auto& item : doc.at("boxcox")) {
            BoxCoxChannel c;
            c.lambda = item.at("lambda").get<double>();
            c.shift = item.at("shift").get<double>();
            c.mean = item.at("mean").get<double>();
            c.stdev = item.at("stdev").get<double>();
            c.identity = item.at("identity").get<bool>();
            model.transform.channels.push_back(c);
        }
        const auto& hmm = doc.at("hmm");
        model.params.pi = hmm.at("pi").get<std::vector<double>>();
        model.params.trans = hmm.at("trans").get<std::vector<std::vector<double>>>();
        model.params.means = hmm.at("means").get<std::vector<std::vector<double>>>();
        model.params.covs = hmm.at("covs").get<std::vector<std::vector<double>>>();
        model.params.validate();
        const auto& ranking = doc.at("ranking");
        model.ranking.totals = ranking.at("totals").get<std::vector<double>>();
        model.ranking.ranks = ranking.at("ranks").get<std::vector<int>>();
        model.ranking.top_two = ranking.at("top_two").get<std::vector<int>>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace qf
