#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "cashflow.h"

using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cashflow_capi_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

struct Handle {
  cf_pipeline* p = nullptr;
  ~Handle() { cf_pipeline_destroy(p); }
};

json run(cf_pipeline* p, cf_status (*fn)(cf_pipeline*, char**)) {
  char* summary = nullptr;
  const cf_status status = fn(p, &summary);
  REQUIRE(status == CF_OK);
  REQUIRE(summary != nullptr);
  const auto parsed = json::parse(summary);
  cf_string_free(summary);
  return parsed;
}

}  // namespace

TEST_CASE("version and status names are stable strings") {
  CHECK(std::strcmp(cf_version(), "1.0.0") == 0);
  CHECK(std::strcmp(cf_status_name(CF_OK), "OK") == 0);
  CHECK(std::strcmp(cf_status_name(CF_ERR_CONFIG), "CONFIG") == 0);
  cf_string_free(nullptr);  // must be a no-op
}

TEST_CASE("null arguments are CONFIG errors, not crashes") {
  CHECK(cf_pipeline_create(nullptr, nullptr, nullptr) == CF_ERR_CONFIG);
  cf_pipeline* p = nullptr;
  CHECK(cf_pipeline_create(nullptr, "/tmp/cashflow_capi_null", &p) == CF_OK);
  CHECK(cf_pipeline_override(p, nullptr, "1") == CF_ERR_CONFIG);
  CHECK(cf_run_synth(nullptr, nullptr) == CF_ERR_CONFIG);
  cf_pipeline_destroy(p);
  cf_pipeline_destroy(nullptr);
  std::filesystem::remove_all("/tmp/cashflow_capi_null");
}

TEST_CASE("full chain through the C API: synth .. evaluate") {
  TempDir tmp;
  Handle h;
  REQUIRE(cf_pipeline_create(nullptr, tmp.path.c_str(), &h.p) == CF_OK);
  REQUIRE(cf_pipeline_override(h.p, "synth.n_applicants", "150") == CF_OK);
  REQUIRE(cf_pipeline_override(h.p, "seed", "7") == CF_OK);

  const auto synth = run(h.p, cf_run_synth);
  CHECK(synth["applicants"] == 150);
  const auto ingest = run(h.p, cf_run_ingest);
  CHECK(ingest["statements"] == 900);
  CHECK(ingest["rejected"] == 0);
  const auto featurize = run(h.p, cf_run_featurize);
  CHECK(featurize["written"] == 150);
  const auto bin = run(h.p, cf_run_bin);
  CHECK(bin["features"] == 17);
  const auto train = run(h.p, cf_run_train);
  CHECK(train["promoted"] == true);
  const auto evaluate = run(h.p, cf_run_evaluate);
  CHECK(evaluate["auroc"].contains("LR"));
  const auto report = run(h.p, cf_run_report);
  CHECK(report.contains("iv_report"));

  CHECK(std::filesystem::exists(tmp.path / "model.json"));
  CHECK(std::filesystem::exists(tmp.path / "reports" / "results.csv"));
  CHECK(std::filesystem::exists(tmp.path / "reports" / "roc.svg"));
}

TEST_CASE("stage ordering errors surface as CONFIG with a message") {
  TempDir tmp;
  Handle h;
  REQUIRE(cf_pipeline_create(nullptr, tmp.path.c_str(), &h.p) == CF_OK);
  char* summary = nullptr;
  CHECK(cf_run_train(h.p, &summary) == CF_ERR_CONFIG);
  CHECK(summary == nullptr);
  CHECK(std::string(cf_last_error(h.p)).find("WoeTable") != std::string::npos);
}

TEST_CASE("bad override values surface as CONFIG when the stage reads them") {
  TempDir tmp;
  Handle h;
  REQUIRE(cf_pipeline_create(nullptr, tmp.path.c_str(), &h.p) == CF_OK);
  REQUIRE(cf_pipeline_override(h.p, "synth.n_applicants", "not_a_number") == CF_OK);
  CHECK(cf_run_synth(h.p, nullptr) == CF_ERR_CONFIG);
  CHECK(std::string(cf_last_error(h.p)).find("synth.n_applicants") != std::string::npos);
}

TEST_CASE("server starts on an ephemeral port, serves, and stops") {
  TempDir tmp;
  Handle h;
  REQUIRE(cf_pipeline_create(nullptr, tmp.path.c_str(), &h.p) == CF_OK);
  REQUIRE(cf_pipeline_override(h.p, "synth.n_applicants", "120") == CF_OK);
  for (auto fn : {cf_run_synth, cf_run_featurize, cf_run_bin, cf_run_train})
    REQUIRE(fn(h.p, nullptr) == CF_OK);

  cf_server* server = nullptr;
  REQUIRE(cf_server_start(h.p, &server) == CF_OK);
  int port = 0;
  REQUIRE(cf_server_port(server, &port) == CF_OK);
  CHECK(port > 0);

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/v1/models");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto models = json::parse(res->body);
  REQUIRE(models.size() == 1);
  CHECK(models[0]["status"] == "champion");

  CHECK(cf_server_stop(server) == CF_OK);
  cf_server_destroy(server);
}
