// Command-line front end for the cashflow engine. All engine work goes
// through the shared library's C API; this binary only parses arguments,
// renders summaries and maps statuses to exit codes.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cashflow.h"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

void render_summary(const std::string& summary, bool json_mode) {
  if (json_mode) {
    std::printf("%s\n", summary.c_str());
    return;
  }
  const auto j = nlohmann::json::parse(summary, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    std::printf("%s\n", summary.c_str());
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::printf("%-18s\n", key.c_str());
      for (const auto& [k2, v2] : value.items())
        std::printf("  %-16s %s\n", k2.c_str(), v2.dump().c_str());
    } else {
      std::printf("%-18s %s\n", key.c_str(),
                  value.is_string() ? value.get<std::string>().c_str() : value.dump().c_str());
    }
  }
}

struct StageArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  long long seed = -1;
  bool json_mode = false;
};

int fail(cf_pipeline* pipeline, cf_status status, bool json_mode) {
  const char* message = pipeline ? cf_last_error(pipeline) : "";
  if (json_mode)
    std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", cf_status_name(status),
                 message);
  else
    std::fprintf(stderr, "error [%s]: %s\n", cf_status_name(status), message);
  if (pipeline) cf_pipeline_destroy(pipeline);
  return static_cast<int>(status);
}

cf_status apply_common(cf_pipeline* pipeline, const StageArgs& args) {
  if (args.seed >= 0) {
    const auto status =
        cf_pipeline_override(pipeline, "seed", std::to_string(args.seed).c_str());
    if (status != CF_OK) return status;
  }
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) return CF_ERR_CONFIG;
    const auto status =
        cf_pipeline_override(pipeline, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (status != CF_OK) return status;
  }
  return CF_OK;
}

using StageFn = cf_status (*)(cf_pipeline*, char**);

int run_stage_command(const StageArgs& args, StageFn stage) {
  cf_pipeline* pipeline = nullptr;
  cf_status status = cf_pipeline_create(args.config_path.empty() ? nullptr : args.config_path.c_str(),
                                        args.out_dir.c_str(), &pipeline);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);
  status = apply_common(pipeline, args);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);

  char* summary = nullptr;
  status = stage(pipeline, &summary);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);
  render_summary(summary ? summary : "{}", args.json_mode);
  cf_string_free(summary);
  cf_pipeline_destroy(pipeline);
  return 0;
}

int run_serve(const StageArgs& args) {
  cf_pipeline* pipeline = nullptr;
  cf_status status = cf_pipeline_create(args.config_path.empty() ? nullptr : args.config_path.c_str(),
                                        args.out_dir.c_str(), &pipeline);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);
  status = apply_common(pipeline, args);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);

  cf_server* server = nullptr;
  status = cf_server_start(pipeline, &server);
  if (status != CF_OK) return fail(pipeline, status, args.json_mode);

  int port = 0;
  cf_server_port(server, &port);
  if (args.json_mode)
    std::printf("{\"listening\":true,\"port\":%d}\n", port);
  else
    std::printf("serving on port %d (Ctrl-C to stop)\n", port);
  std::fflush(stdout);

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));

  cf_server_stop(server);
  cf_server_destroy(server);
  cf_pipeline_destroy(pipeline);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cashflow - bank-statement cash-flow underwriting pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  StageArgs args;
  app.add_option("--config", args.config_path, "TOML-style config file");
  app.add_option("--seed", args.seed, "Override the run seed");
  app.add_option("--out", args.out_dir, "Artifact output directory")->capture_default_str();
  app.add_flag("--json", args.json_mode, "Machine-readable JSON output");
  app.add_option("--set", args.overrides, "Dotted config override key=value (repeatable)");

  struct Command {
    const char* name;
    const char* help;
    StageFn fn;
  };
  const std::vector<Command> commands = {
      {"synth", "Generate the deterministic synthetic portfolio", cf_run_synth},
      {"ingest", "Parse and validate statements; write abnormality report", cf_run_ingest},
      {"featurize", "Compute features into the versioned feature store", cf_run_featurize},
      {"bin", "Fit WOE binning on the training split; write IV report", cf_run_bin},
      {"train", "Train the penalized scorecard; register the artifact", cf_run_train},
      {"evaluate", "Score the validation split; write results CSV and ROC SVG", cf_run_evaluate},
      {"ablate", "Feature-group ablations under cross-validation", cf_run_ablate},
      {"report", "Re-render IV reports from the model artifact", cf_run_report},
  };

  StageFn selected = nullptr;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&selected, fn = c.fn] { selected = fn; });
  }
  bool serve_selected = false;
  app.add_subcommand("serve", "Serve scoring over HTTP with the registered champion")
      ->callback([&serve_selected] { serve_selected = true; });

  CLI11_PARSE(app, argc, argv);

  if (serve_selected) return run_serve(args);
  return run_stage_command(args, selected);
}
