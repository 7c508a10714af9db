/*
 * cashflow - cash-flow underwriting engine, C API.
 *
 * All functionality sits behind opaque handles and integer status codes.
 * Strings returned through `char **` out-parameters are heap-allocated by
 * the library and must be released with cf_string_free(). Handles are not
 * thread-safe unless noted; create one pipeline per thread or serialize
 * calls.
 */
#ifndef CASHFLOW_H
#define CASHFLOW_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_CONFIG = 2,    /* invalid configuration or missing stage input   */
  CF_ERR_PARSE = 3,     /* malformed statement/row/column/currency        */
  CF_ERR_VALIDATE = 4,  /* abnormality rejection, month/account contract  */
  CF_ERR_DATA = 5,      /* empty input, single class, unbinned value      */
  CF_ERR_MODEL = 6,     /* training/threshold/parameter errors            */
  CF_ERR_STORE = 7,     /* feature-store duplicate/missing keys           */
  CF_ERR_REGISTRY = 8,  /* registry/service governance errors             */
  CF_ERR_IO = 9,        /* filesystem failures                            */
  CF_ERR_INTERNAL = 10
} cf_status;

typedef struct cf_pipeline cf_pipeline;
typedef struct cf_server cf_server;

/* Library semantic version string; static storage, do not free. */
CF_API const char *cf_version(void);

/* Human-readable name of a status code; static storage, do not free. */
CF_API const char *cf_status_name(cf_status status);

/* Releases strings returned via out-parameters. NULL is a no-op. */
CF_API void cf_string_free(char *s);

/*
 * Pipeline lifecycle. `config_path` may be NULL or "" for built-in
 * defaults; `out_dir` is the artifact root. The error message of the most
 * recent failing call is kept on the handle.
 */
CF_API cf_status cf_pipeline_create(const char *config_path, const char *out_dir,
                                    cf_pipeline **out);
CF_API void cf_pipeline_destroy(cf_pipeline *p);

/* Dotted-key override (e.g. "synth.n_applicants", "model.lambda"). */
CF_API cf_status cf_pipeline_override(cf_pipeline *p, const char *key, const char *value);

/* Message for the last failing call on this handle; static until the next
 * call, do not free. Empty string when no error occurred. */
CF_API const char *cf_last_error(const cf_pipeline *p);

/*
 * Pipeline stages. Each runs one stage end-to-end and, on success, stores a
 * JSON summary in *summary_json (caller frees). `summary_json` may be NULL
 * when the caller only needs the status.
 */
CF_API cf_status cf_run_synth(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_ingest(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_featurize(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_bin(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_train(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_evaluate(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_ablate(cf_pipeline *p, char **summary_json);
CF_API cf_status cf_run_report(cf_pipeline *p, char **summary_json);

/*
 * Decision service. cf_server_start binds the configured address/port
 * (port 0 picks an ephemeral one) and serves on a background thread until
 * cf_server_stop. The pipeline handle must outlive the server.
 */
CF_API cf_status cf_server_start(cf_pipeline *p, cf_server **out);
CF_API cf_status cf_server_port(const cf_server *s, int *port);
CF_API cf_status cf_server_stop(cf_server *s);
CF_API void cf_server_destroy(cf_server *s);

#ifdef __cplusplus
}
#endif

#endif /* CASHFLOW_H */
