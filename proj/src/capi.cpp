#include "quantfusion.h"

#include "quantfusion/commands.hpp"
#include "quantfusion/config.hpp"
#include "quantfusion/errors.hpp"

#include <exception>
#include <string>
#include <vector>

struct qf_session {
    qf::RunConfig config;
    std::string last_error;
};

namespace {

constexpr const char* kVersion = "1.0.0";

// Runs the callable and folds any thrown error into (status, message).
// The error taxonomy maps onto the coarser C enum: parse problems are
// usage errors, shape/stage/range violations are validation errors, and
// degenerate or missing data is a data error.
template <typename Fn>
qf_status guarded(qf_session* session, Fn&& fn) {
    if (session == nullptr) return QF_ERROR_USAGE;
    session->last_error.clear();
    try {
        fn();
        return QF_OK;
    } catch (const qf::ParseError& e) {
        session->last_error = e.what();
        return QF_ERROR_USAGE;
    } catch (const qf::InsufficientDataError& e) {
        session->last_error = e.what();
        return QF_ERROR_DATA;
    } catch (const qf::EmptyPanelError& e) {
        session->last_error = e.what();
        return QF_ERROR_DATA;
    } catch (const qf::DomainError& e) {
        session->last_error = e.what();
        return QF_ERROR_DATA;
    } catch (const qf::ValidationError& e) {
        session->last_error = e.what();
        return QF_ERROR_VALIDATION;
    } catch (const qf::IoError& e) {
        session->last_error = e.what();
        return QF_ERROR_IO;
    } catch (const std::exception& e) {
        session->last_error = e.what();
        return QF_ERROR_INTERNAL;
    } catch (...) {
        session->last_error = "unknown failure";
        return QF_ERROR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* qf_version(void) { return kVersion; }

qf_session* qf_session_open(void) { return new qf_session(); }

void qf_session_close(qf_session* session) { delete session; }

const char* qf_last_error(const qf_session* session) {
    return session == nullptr ? "" : session->last_error.c_str();
}

qf_status qf_load_config(qf_session* session, const char* path) {
    return guarded(session, [&] {
        if (path == nullptr) throw qf::ParseError("config path is null");
        session->config = qf::load_run_config(path);
    });
}

qf_status qf_load_config_text(qf_session* session, const char* json_text) {
    return guarded(session, [&] {
        if (json_text == nullptr) throw qf::ParseError("config text is null");
        session->config = qf::run_config_from_json(json_text);
    });
}

qf_status qf_set_seed(qf_session* session, unsigned long long seed) {
    return guarded(session, [&] { session->config.seed = seed; });
}

qf_status qf_set_output_dir(qf_session* session, const char* dir) {
    return guarded(session, [&] {
        if (dir == nullptr || dir[0] == '\0')
            throw qf::ValidationError("output directory must not be empty");
        session->config.out_dir = dir;
    });
}

qf_status qf_run_synth(qf_session* session) {
    return guarded(session, [&] { qf::cmd_synth(session->config); });
}

qf_status qf_run_preprocess(qf_session* session) {
    return guarded(session, [&] { qf::cmd_preprocess(session->config); });
}

qf_status qf_run_ic(qf_session* session) {
    return guarded(session, [&] { qf::cmd_ic(session->config); });
}

qf_status qf_run_train_picker(qf_session* session) {
    return guarded(session, [&] { qf::cmd_train_picker(session->config); });
}

qf_status qf_run_train_regime(qf_session* session) {
    return guarded(session, [&] { qf::cmd_train_regime(session->config); });
}

qf_status qf_run_backtest(qf_session* session) {
    return guarded(session, [&] { qf::cmd_backtest(session->config); });
}

qf_status qf_run_report(qf_session* session, const char* const* metrics_paths,
                        int count) {
    return guarded(session, [&] {
        if (count < 0 || (count > 0 && metrics_paths == nullptr))
            throw qf::ParseError("bad metrics path list");
        std::vector<std::string> paths;
        paths.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            if (metrics_paths[i] == nullptr)
                throw qf::ParseError("metrics path is null");
            paths.emplace_back(metrics_paths[i]);
        }
        qf::cmd_report(paths, session->config.out_dir);
    });
}

} // extern "C"
