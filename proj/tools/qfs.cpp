// Command-line driver. Talks to the library exclusively through the C
// API so this binary doubles as a smoke test of the embedding surface.
#include "quantfusion.h"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace {

struct SessionGuard {
    qf_session* handle = qf_session_open();
    ~SessionGuard() { qf_session_close(handle); }
    SessionGuard() = default;
    SessionGuard(const SessionGuard&) = delete;
    SessionGuard& operator=(const SessionGuard&) = delete;
};

int report_failure(qf_session* session, qf_status status) {
    std::cerr << "error: " << qf_last_error(session) << "\n";
    return static_cast<int>(status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"factor picking, market timing, and backtesting toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qf_version());
    app.footer("exit codes: 0 success, 2 usage, 3 validation, 4 data, 5 io, 6 internal");

    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    std::vector<std::string> report_inputs;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration file");
        cmd->add_option("--seed", seed, "override the config's global seed");
        cmd->add_option("--out", out_dir, "override the config's output directory");
        return cmd;
    };

    add_common(app.add_subcommand("synth", "generate a synthetic market data set"));
    add_common(app.add_subcommand("preprocess", "run the factor preprocessing chain"));
    add_common(app.add_subcommand("ic", "rank factors by information coefficient"));
    add_common(app.add_subcommand("train-picker", "train the stock picking network"));
    add_common(app.add_subcommand("train-regime", "fit the market state model"));
    add_common(app.add_subcommand("backtest", "run the full strategy simulation"));
    CLI::App* report =
        add_common(app.add_subcommand("report", "tabulate metrics files side by side"));
    report->add_option("inputs", report_inputs, "metrics JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(QF_ERROR_USAGE);
    }

    CLI::App* cmd = app.get_subcommands().front();

    SessionGuard session;
    qf_status status = QF_OK;
    if (!config_path.empty()) status = qf_load_config(session.handle, config_path.c_str());
    if (status == QF_OK && cmd->count("--seed") > 0)
        status = qf_set_seed(session.handle, seed);
    if (status == QF_OK && !out_dir.empty())
        status = qf_set_output_dir(session.handle, out_dir.c_str());
    if (status != QF_OK) return report_failure(session.handle, status);

    const std::string& name = cmd->get_name();
    if (name == "synth") {
        status = qf_run_synth(session.handle);
    } else if (name == "preprocess") {
        status = qf_run_preprocess(session.handle);
    } else if (name == "ic") {
        status = qf_run_ic(session.handle);
    } else if (name == "train-picker") {
        status = qf_run_train_picker(session.handle);
    } else if (name == "train-regime") {
        status = qf_run_train_regime(session.handle);
    } else if (name == "backtest") {
        status = qf_run_backtest(session.handle);
    } else {
        std::vector<const char*> paths;
        paths.reserve(report_inputs.size());
        for (const auto& p : report_inputs) paths.push_back(p.c_str());
        status = qf_run_report(session.handle, paths.data(),
                               static_cast<int>(paths.size()));
    }
    if (status != QF_OK) return report_failure(session.handle, status);
    return 0;
}
