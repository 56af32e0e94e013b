/* C interface to the fusion-strategy toolkit. A session holds one run
 * configuration plus the message of the last failure; every command
 * reads its inputs and writes its artifacts per that configuration.
 *
 * All functions are synchronous. A session must not be shared between
 * threads without external locking. Strings returned by the library
 * stay owned by the session and are valid until the next call on it. */
#ifndef QUANTFUSION_H
#define QUANTFUSION_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qf_session qf_session;

/* Values double as process exit codes for the bundled CLI. */
typedef enum qf_status {
    QF_OK = 0,
    QF_ERROR_USAGE = 2,      /* malformed config document or arguments */
    QF_ERROR_VALIDATION = 3, /* config values or inputs violate an invariant */
    QF_ERROR_DATA = 4,       /* insufficient or mathematically degenerate data */
    QF_ERROR_IO = 5,         /* file system failure */
    QF_ERROR_INTERNAL = 6    /* unexpected failure; please report */
} qf_status;

const char* qf_version(void);

/* Never returns NULL; release with qf_session_close. A fresh session
 * carries the default configuration (synthetic data, seed 42, ./out). */
qf_session* qf_session_open(void);
void qf_session_close(qf_session* session);

/* Message of the last failing call on this session, empty on success. */
const char* qf_last_error(const qf_session* session);

/* Replaces the session configuration with the parsed document. Setter
 * overrides below apply to the loaded configuration, so call them after. */
qf_status qf_load_config(qf_session* session, const char* path);
qf_status qf_load_config_text(qf_session* session, const char* json_text);
qf_status qf_set_seed(qf_session* session, unsigned long long seed);
qf_status qf_set_output_dir(qf_session* session, const char* dir);

/* Commands. Artifact file names are fixed within the output directory;
 * see the project README for the per-command list. */
qf_status qf_run_synth(qf_session* session);
qf_status qf_run_preprocess(qf_session* session);
qf_status qf_run_ic(qf_session* session);
qf_status qf_run_train_picker(qf_session* session);
qf_status qf_run_train_regime(qf_session* session);
qf_status qf_run_backtest(qf_session* session);

/* Builds the comparison table from previously written metrics files. */
qf_status qf_run_report(qf_session* session, const char* const* metrics_paths,
                        int count);

#ifdef __cplusplus
}
#endif

#endif /* QUANTFUSION_H */
