#include "cashflow.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "errors.hpp"
#include "pipeline.hpp"
#include "service.hpp"

using cashflow::Errc;

namespace {

cf_status status_for(Errc code) {
  switch (code) {
    case Errc::ok: return CF_OK;
    case Errc::config_invalid:
    case Errc::invalid_config: return CF_ERR_CONFIG;
    case Errc::malformed_row:
    case Errc::missing_column:
    case Errc::currency_scale_error: return CF_ERR_PARSE;
    case Errc::wrong_month_count:
    case Errc::non_consecutive_months:
    case Errc::mixed_accounts:
    case Errc::validation_rejected: return CF_ERR_VALIDATE;
    case Errc::empty_input:
    case Errc::single_class:
    case Errc::unbinned_value:
    case Errc::leakage_guard: return CF_ERR_DATA;
    case Errc::invalid_thresholds:
    case Errc::invalid_param: return CF_ERR_MODEL;
    case Errc::duplicate_key:
    case Errc::not_found: return CF_ERR_STORE;
    case Errc::duplicate_artifact:
    case Errc::schema_invalid:
    case Errc::no_champion:
    case Errc::insufficient_outcomes:
    case Errc::empty_window:
    case Errc::invalid_transition: return CF_ERR_REGISTRY;
    case Errc::io_error: return CF_ERR_IO;
    case Errc::internal: return CF_ERR_INTERNAL;
  }
  return CF_ERR_INTERNAL;
}

char *dup_string(const std::string& s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct cf_pipeline {
  std::unique_ptr<cashflow::Pipeline> pipeline;
  std::string last_error;
};

struct cf_server {
  std::unique_ptr<cashflow::DecisionService> service;
  std::unique_ptr<cashflow::ServiceHttp> http;
  int port = 0;
};

namespace {

template <typename Fn>
cf_status run_stage(cf_pipeline *p, char **summary_json, Fn&& fn) {
  if (!p) return CF_ERR_CONFIG;
  p->last_error.clear();
  try {
    const std::string summary = fn(*p->pipeline);
    if (summary_json) *summary_json = dup_string(summary);
    return CF_OK;
  } catch (const cashflow::Error& e) {
    p->last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    p->last_error = e.what();
    return CF_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char *cf_version(void) { return "1.0.0"; }

const char *cf_status_name(cf_status status) {
  switch (status) {
    case CF_OK: return "OK";
    case CF_ERR_CONFIG: return "CONFIG";
    case CF_ERR_PARSE: return "PARSE";
    case CF_ERR_VALIDATE: return "VALIDATE";
    case CF_ERR_DATA: return "DATA";
    case CF_ERR_MODEL: return "MODEL";
    case CF_ERR_STORE: return "STORE";
    case CF_ERR_REGISTRY: return "REGISTRY";
    case CF_ERR_IO: return "IO";
    case CF_ERR_INTERNAL: return "INTERNAL";
  }
  return "INTERNAL";
}

void cf_string_free(char *s) { std::free(s); }

cf_status cf_pipeline_create(const char *config_path, const char *out_dir, cf_pipeline **out) {
  if (!out || !out_dir) return CF_ERR_CONFIG;
  *out = nullptr;
  auto handle = std::make_unique<cf_pipeline>();
  try {
    handle->pipeline = std::make_unique<cashflow::Pipeline>(
        cashflow::Pipeline::from_file(config_path ? config_path : "", out_dir));
  } catch (const cashflow::Error& e) {
    return status_for(e.code());
  } catch (const std::exception&) {
    return CF_ERR_INTERNAL;
  }
  *out = handle.release();
  return CF_OK;
}

void cf_pipeline_destroy(cf_pipeline *p) { delete p; }

cf_status cf_pipeline_override(cf_pipeline *p, const char *key, const char *value) {
  if (!p || !key || !value) return CF_ERR_CONFIG;
  p->pipeline->config().set(key, value);
  return CF_OK;
}

const char *cf_last_error(const cf_pipeline *p) { return p ? p->last_error.c_str() : ""; }

cf_status cf_run_synth(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_synth(); });
}
cf_status cf_run_ingest(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_ingest(); });
}
cf_status cf_run_featurize(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_featurize(); });
}
cf_status cf_run_bin(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_bin(); });
}
cf_status cf_run_train(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_train(); });
}
cf_status cf_run_evaluate(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_evaluate(); });
}
cf_status cf_run_ablate(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_ablate(); });
}
cf_status cf_run_report(cf_pipeline *p, char **summary_json) {
  return run_stage(p, summary_json, [](cashflow::Pipeline& pl) { return pl.run_report(); });
}

cf_status cf_server_start(cf_pipeline *p, cf_server **out) {
  if (!p || !out) return CF_ERR_CONFIG;
  *out = nullptr;
  p->last_error.clear();
  auto server = std::make_unique<cf_server>();
  try {
    server->service = p->pipeline->make_service();
    server->http = std::make_unique<cashflow::ServiceHttp>(*server->service,
                                                           p->pipeline->data_dir());
    const auto svc = p->pipeline->service_config();
    server->port = server->http->start(svc.listen_address, svc.port);
  } catch (const cashflow::Error& e) {
    p->last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    p->last_error = e.what();
    return CF_ERR_INTERNAL;
  }
  *out = server.release();
  return CF_OK;
}

cf_status cf_server_port(const cf_server *s, int *port) {
  if (!s || !port) return CF_ERR_CONFIG;
  *port = s->port;
  return CF_OK;
}

cf_status cf_server_stop(cf_server *s) {
  if (!s) return CF_ERR_CONFIG;
  s->http->stop();
  return CF_OK;
}

void cf_server_destroy(cf_server *s) { delete s; }

}  // extern "C"
