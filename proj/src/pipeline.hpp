#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "config.hpp"
#include "service.hpp"
#include "synth.hpp"

namespace cashflow {

// One pipeline stage per CLI subcommand. Every command reads its declared
// inputs and writes its declared outputs under the configured output
// directory; summaries come back as JSON. Artifacts embed the config hash
// (path-independent) and seed that produced them.
class Pipeline {
 public:
  // `out_dir` is deliberately outside the config hash so reruns into
  // different directories stay byte-identical.
  Pipeline(Config config, std::string out_dir);

  static Pipeline from_file(const std::string& config_path, const std::string& out_dir);

  const Config& config() const { return config_; }
  Config& config() { return config_; }
  const std::string& out_dir() const { return out_dir_; }
  std::string config_hash() const;
  std::uint64_t seed() const;

  // Stage entry points; each returns a summary JSON document.
  std::string run_synth();
  std::string run_ingest();
  std::string run_featurize();
  std::string run_bin();
  std::string run_train();
  std::string run_evaluate();
  std::string run_ablate();
  std::string run_report();

  // Builds the decision service (registry + logs under out_dir) for `serve`
  // and for tests.
  std::unique_ptr<DecisionService> make_service();
  ServiceConfig service_config() const;

  // Derived paths.
  std::string data_dir() const;
  std::string store_path() const;
  std::string woe_table_path() const;
  std::string model_path() const;
  std::string registry_dir() const;
  std::string logs_dir() const;
  std::string reports_dir() const;

  GeneratorConfig generator_config() const;
  PipelineFitOptions fit_options() const;
  SplitPlan split_plan() const;
  std::string timestamp() const;

 private:
  struct Labeled {
    std::vector<FeatureVector> vectors;
    std::vector<int> labels;
  };
  Labeled load_labeled_store() const;
  void write_meta(const std::string& artifact_path, const std::string& command) const;

  Config config_;
  std::string out_dir_;
};

}  // namespace cashflow
