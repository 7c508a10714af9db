#include "pipeline.hpp"

#include <filesystem>

#include <json.hpp>

#include "errors.hpp"
#include "feature_store.hpp"
#include "jsonl.hpp"
#include "metrics.hpp"
#include "report.hpp"
#include "sha256.hpp"

namespace cashflow {

namespace fs = std::filesystem;
using nlohmann::json;

Pipeline::Pipeline(Config config, std::string out_dir)
    : config_(std::move(config)), out_dir_(std::move(out_dir)) {
  if (out_dir_.empty()) raise(Errc::config_invalid, "output directory must be set");
  fs::create_directories(out_dir_);
  fs::create_directories(reports_dir());
}

Pipeline Pipeline::from_file(const std::string& config_path, const std::string& out_dir) {
  return Pipeline(config_path.empty() ? Config{} : Config::load(config_path), out_dir);
}

std::string Pipeline::config_hash() const {
  // paths.* stays out of the hash: moving the artifact tree must not change
  // provenance.
  std::string canonical;
  std::size_t start = 0;
  const std::string all = config_.canonical();
  while (start < all.size()) {
    const auto nl = all.find('\n', start);
    const std::string line = all.substr(start, nl - start);
    start = nl + 1;
    if (line.rfind("paths.", 0) != 0) {
      canonical += line;
      canonical.push_back('\n');
    }
  }
  return sha256_hex(canonical);
}

std::uint64_t Pipeline::seed() const {
  return static_cast<std::uint64_t>(config_.get_int("seed", 42));
}

std::string Pipeline::data_dir() const { return out_dir_ + "/data"; }
std::string Pipeline::store_path() const { return out_dir_ + "/store.jsonl"; }
std::string Pipeline::woe_table_path() const { return out_dir_ + "/woe_table.json"; }
std::string Pipeline::model_path() const { return out_dir_ + "/model.json"; }
std::string Pipeline::registry_dir() const { return out_dir_ + "/registry"; }
std::string Pipeline::logs_dir() const { return out_dir_ + "/logs"; }
std::string Pipeline::reports_dir() const { return out_dir_ + "/reports"; }

std::string Pipeline::timestamp() const {
  // Logical clock: artifacts stay byte-identical across reruns.
  return config_.get_string("timestamp", "2024-07-01T00:00:00Z");
}

GeneratorConfig Pipeline::generator_config() const {
  GeneratorConfig gen;
  gen.seed = seed();
  gen.n_applicants = static_cast<int>(config_.get_int("synth.n_applicants", 611));
  gen.event_rate_target = config_.get_double("synth.event_rate_target", 0.152);
  gen.noise_scale = config_.get_double("synth.noise_scale", GeneratorConfig{}.noise_scale);
  gen.months = static_cast<int>(config_.get_int("synth.months", 6));
  const auto weights = config_.table_doubles("synth.signal_weights");
  gen.signal_weights = weights.empty() && config_.get_bool("synth.default_signal", true)
                           ? GeneratorConfig::default_signal_weights()
                           : weights;
  return gen;
}

PipelineFitOptions Pipeline::fit_options() const {
  PipelineFitOptions options;
  options.k_init = static_cast<int>(config_.get_int("binning.k_init", kDefaultInitialBins));
  options.min_bin_count =
      static_cast<int>(config_.get_int("binning.min_bin_count", kDefaultMinBinCount));
  options.epsilon = config_.get_double("binning.epsilon", kDefaultEpsilon);
  options.monotonic = config_.get_bool("binning.monotonic", true);
  options.train.lambda = config_.get_double("model.lambda", 1.0);
  options.train.tol = config_.get_double("model.tol", 1e-8);
  options.train.max_iter = static_cast<int>(config_.get_int("model.max_iter", 100));
  options.thresholds.t_low = config_.get_double("thresholds.t_low", 0.05);
  options.thresholds.t_high = config_.get_double("thresholds.t_high", 0.15);
  return options;
}

SplitPlan Pipeline::split_plan() const {
  SplitPlan plan;
  plan.seed = seed();
  plan.train_fraction = config_.get_double("split.train_fraction", 0.60);
  plan.stratified = config_.get_bool("split.stratified", true);
  plan.fold_count = static_cast<int>(config_.get_int("split.folds", 5));
  plan.repeats = static_cast<int>(config_.get_int("split.repeats", 1));
  return plan;
}

ServiceConfig Pipeline::service_config() const {
  Config cfg = config_;  // env vars override the service block
  cfg.apply_env_overrides({"service.listen", "service.port", "service.promote_after",
                           "service.psi_alert_level", "service.schedule_interval_days",
                           "service.canary_fraction", "service.min_outcomes_per_class",
                           "service.drift_window", "thresholds.t_low", "thresholds.t_high"});
  ServiceConfig svc;
  svc.listen_address = cfg.get_string("service.listen", "127.0.0.1");
  svc.port = static_cast<int>(cfg.get_int("service.port", 0));
  svc.promote_after = static_cast<int>(cfg.get_int("service.promote_after", 3));
  svc.psi_alert_level = cfg.get_double("service.psi_alert_level", 0.2);
  svc.schedule_interval_days = static_cast<int>(cfg.get_int("service.schedule_interval_days", 365));
  svc.canary_fraction = cfg.get_double("service.canary_fraction", 0.0);
  svc.min_outcomes_per_class = static_cast<int>(cfg.get_int("service.min_outcomes_per_class", 5));
  svc.drift_window = static_cast<int>(cfg.get_int("service.drift_window", 500));
  svc.fit = fit_options();
  svc.fit.thresholds.t_low = cfg.get_double("thresholds.t_low", 0.05);
  svc.fit.thresholds.t_high = cfg.get_double("thresholds.t_high", 0.15);
  return svc;
}

void Pipeline::write_meta(const std::string& artifact_path, const std::string& command) const {
  json j;
  j["config_hash"] = config_hash();
  j["seed"] = seed();
  j["command"] = command;
  j["feature_set_version"] = kFeatureSetVersion;
  write_file(artifact_path + ".meta.json", j.dump());
}

// ---------------------------------------------------------------------------
// stages

std::string Pipeline::run_synth() {
  const auto gen = generator_config();
  const Portfolio portfolio = generate_portfolio(gen);
  export_dataset(portfolio, data_dir());
  write_meta(data_dir() + "/dataset", "synth");

  long events = 0;
  for (const auto& t : portfolio.truths) events += t.label;
  json summary;
  summary["command"] = "synth";
  summary["applicants"] = portfolio.records.size();
  summary["events"] = events;
  summary["event_rate"] = static_cast<double>(events) / static_cast<double>(portfolio.records.size());
  summary["data_dir"] = data_dir();
  summary["seed"] = gen.seed;
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::string Pipeline::run_ingest() {
  if (!fs::exists(data_dir() + "/forms.csv"))
    raise(Errc::config_invalid, "ingest needs a dataset under " + data_dir() + " (run synth first)");

  const std::string rules_path = config_.get_string("ingest.category_rules", "");
  const CategoryRules rules =
      rules_path.empty() ? CategoryRules::defaults() : CategoryRules::load(rules_path);

  // Re-parse every statement, validate, and write the abnormality report.
  const std::string report_path = reports_dir() + "/abnormalities.jsonl";
  if (fs::exists(report_path)) fs::remove(report_path);

  long statements = 0, flagged = 0, rejected = 0;
  std::vector<fs::path> account_dirs;
  for (const auto& entry : fs::directory_iterator(data_dir() + "/statements"))
    if (entry.is_directory()) account_dirs.push_back(entry.path());
  std::sort(account_dirs.begin(), account_dirs.end());

  std::string report_lines;
  for (const auto& acc_dir : account_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(acc_dir))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      CsvContext context;
      context.account_id = acc_dir.filename().string();
      context.month = parse_year_month(file.stem().string());
      const auto statement =
          parse_statement(read_file(file.string()), StatementFormat::csv, context, rules);
      const auto report = validate_statement(statement);
      ++statements;
      if (!report.flags.empty()) {
        ++flagged;
        if (report.severity == Severity::reject) ++rejected;
      }
      report_lines += report.to_json_line();
      report_lines.push_back('\n');
    }
  }
  write_file(report_path, report_lines);
  write_meta(report_path, "ingest");

  json summary;
  summary["command"] = "ingest";
  summary["statements"] = statements;
  summary["flagged"] = flagged;
  summary["rejected"] = rejected;
  summary["report"] = report_path;
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::string Pipeline::run_featurize() {
  if (!fs::exists(data_dir() + "/forms.csv"))
    raise(Errc::config_invalid, "featurize needs a dataset under " + data_dir());

  const auto records = import_dataset(data_dir());
  FeatureStore store(store_path());
  long written = 0, unchanged = 0;
  for (const auto& rec : records) {
    FeatureStoreEntry entry;
    entry.key = {rec.applicant_id, kFeatureSetVersion};
    entry.vector = compute_features(rec, timestamp());
    entry.label = rec.label;
    entry.written_at = timestamp();
    if (store.contains(entry.key)) {
      // Append-only: an identical recompute is a no-op, a conflicting one is
      // the DUPLICATE_KEY error.
      const auto existing = store.get(entry.key);
      if (existing.vector.to_json() != entry.vector.to_json())
        raise(Errc::duplicate_key,
              "feature store already holds a different vector for " + rec.applicant_id);
      ++unchanged;
      continue;
    }
    store.put(entry);
    ++written;
  }
  write_meta(store_path(), "featurize");

  json summary;
  summary["command"] = "featurize";
  summary["written"] = written;
  summary["unchanged"] = unchanged;
  summary["store"] = store_path();
  summary["feature_set_version"] = kFeatureSetVersion;
  summary["config_hash"] = config_hash();
  return summary.dump();
}

Pipeline::Labeled Pipeline::load_labeled_store() const {
  if (!fs::exists(store_path()))
    raise(Errc::config_invalid, "no feature store at " + store_path() + " (run featurize first)");
  FeatureStore store(store_path());
  Labeled out;
  for (const auto& entry : store.all()) {
    if (!entry.label) continue;
    out.vectors.push_back(entry.vector);
    out.labels.push_back(*entry.label);
  }
  if (out.vectors.empty())
    raise(Errc::config_invalid, "feature store holds no labeled entries");
  return out;
}

std::string Pipeline::run_bin() {
  const auto data = load_labeled_store();
  const auto plan = split_plan();
  const auto split = stratified_split(data.labels, plan.train_fraction, plan.seed);

  std::vector<FeatureVector> train_x;
  std::vector<int> train_y;
  for (std::size_t i : split.train) {
    train_x.push_back(data.vectors[i]);
    train_y.push_back(data.labels[i]);
  }

  const SplitId split_id = SplitId::train("split60@" + std::to_string(plan.seed));
  const WoeTable table =
      fit_woe_table(train_x, train_y, features_for(FeatureSet::combined), fit_options(), split_id);
  write_file(woe_table_path(), table.to_json());
  write_meta(woe_table_path(), "bin");

  const auto rows = iv_report(table);
  write_file(reports_dir() + "/iv_report.csv", iv_csv(rows));
  write_file(reports_dir() + "/iv.svg", svg_iv_bars(rows));
  write_meta(reports_dir() + "/iv_report.csv", "bin");

  json summary;
  summary["command"] = "bin";
  summary["train_rows"] = train_x.size();
  summary["features"] = table.feature_order().size();
  summary["woe_table"] = woe_table_path();
  summary["iv_report"] = reports_dir() + "/iv_report.csv";
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::string Pipeline::run_train() {
  if (!fs::exists(woe_table_path()))
    raise(Errc::config_invalid,
          "train needs the WoeTable at " + woe_table_path() + " (run bin first)");
  const WoeTable table = WoeTable::from_json(read_file(woe_table_path()));

  const auto data = load_labeled_store();
  const auto plan = split_plan();
  const auto split = stratified_split(data.labels, plan.train_fraction, plan.seed);
  std::vector<FeatureVector> train_x;
  std::vector<int> train_y;
  for (std::size_t i : split.train) {
    train_x.push_back(data.vectors[i]);
    train_y.push_back(data.labels[i]);
  }

  const auto options = fit_options();
  ScorecardModel model = train_scorecard(train_x, train_y, table, options.train,
                                         options.thresholds, "v1", timestamp());
  model.provenance.config_hash = config_hash();
  model.provenance.seed = seed();
  const std::string artifact = model.to_json();
  write_file(model_path(), artifact);
  write_meta(model_path(), "train");

  // Register; bootstrap the champion when the registry has none.
  ModelRegistry registry(registry_dir());
  std::string registered_version;
  bool promoted = false;
  const std::string hash = sha256_hex(artifact);
  bool already = false;
  for (const auto& e : registry.entries())
    if (e.artifact_hash == hash) {
      already = true;
      registered_version = e.version;
    }
  if (!already) {
    ScorecardModel copy = model;
    copy.version = next_version(registry);
    const auto entry = registry.register_model(copy.to_json(), timestamp(),
                                               {{"train_auroc",
                                                 model.training_metrics.at("train_auroc")}});
    registered_version = entry.version;
    if (!registry.champion_version()) {
      registry.promote(entry.version);
      promoted = true;
    }
  }

  json summary;
  summary["command"] = "train";
  summary["model"] = model_path();
  summary["artifact_hash"] = hash;
  summary["registered_as"] = registered_version;
  summary["promoted"] = promoted;
  summary["train_auroc"] = model.training_metrics.at("train_auroc");
  summary["iterations"] = model.training_metrics.at("iterations");
  summary["converged"] = model.training_metrics.at("converged") == 1.0;
  summary["config_hash"] = config_hash();
  summary["seed"] = seed();
  return summary.dump();
}

std::string Pipeline::run_evaluate() {
  if (!fs::exists(model_path()))
    raise(Errc::config_invalid, "evaluate needs the model at " + model_path() + " (run train first)");
  const ScorecardModel model = ScorecardModel::from_json(read_file(model_path()));

  const auto data = load_labeled_store();
  const auto plan = split_plan();
  const auto split = stratified_split(data.labels, plan.train_fraction, plan.seed);

  std::vector<FeatureVector> train_x, valid_x;
  std::vector<int> train_y, valid_y;
  for (std::size_t i : split.train) {
    train_x.push_back(data.vectors[i]);
    train_y.push_back(data.labels[i]);
  }
  for (std::size_t i : split.valid) {
    valid_x.push_back(data.vectors[i]);
    valid_y.push_back(data.labels[i]);
  }

  // Benchmarks share the scorecard's WOE table; all models score the same
  // held-out split.
  std::vector<std::vector<double>> train_woe, valid_woe;
  for (const auto& v : train_x) train_woe.push_back(transform_woe(v, model.woe_table));
  for (const auto& v : valid_x) valid_woe.push_back(transform_woe(v, model.woe_table));

  std::vector<std::pair<std::string, RocCurve>> curves;
  std::vector<AblationResult> rows;

  {
    std::vector<double> scores;
    for (const auto& v : valid_x) scores.push_back(predict_proba(model, v));
    curves.emplace_back("LR", roc_curve(valid_y, scores));
    AblationResult r;
    r.model_kind = ModelKind::LR;
    r.feature_set = FeatureSet::combined;
    r.auroc_per_fold = {curves.back().second.auroc};
    r.auroc_mean = curves.back().second.auroc;
    r.seed = seed();
    r.params = {{"lambda", model.lambda}};
    rows.push_back(std::move(r));
  }
  for (ModelKind kind : {ModelKind::RF, ModelKind::GB, ModelKind::AB}) {
    const auto params = default_params(kind);
    const auto bench = fit_benchmark(kind, train_woe, train_y, params, seed());
    std::vector<double> scores;
    for (const auto& row : valid_woe) scores.push_back(bench->score(row));
    curves.emplace_back(std::string(model_kind_name(kind)), roc_curve(valid_y, scores));
    AblationResult r;
    r.model_kind = kind;
    r.feature_set = FeatureSet::combined;
    r.auroc_per_fold = {curves.back().second.auroc};
    r.auroc_mean = curves.back().second.auroc;
    r.seed = seed();
    r.params = params;
    rows.push_back(std::move(r));
  }

  write_file(reports_dir() + "/results.csv", results_csv(rows));
  write_file(reports_dir() + "/roc.svg", svg_roc_curves(curves));
  write_meta(reports_dir() + "/results.csv", "evaluate");

  json summary;
  summary["command"] = "evaluate";
  summary["results"] = reports_dir() + "/results.csv";
  summary["roc_svg"] = reports_dir() + "/roc.svg";
  for (const auto& [name, curve] : curves) summary["auroc"][name] = curve.auroc;
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::string Pipeline::run_ablate() {
  const auto data = load_labeled_store();
  const auto plan = split_plan();

  std::vector<ModelKind> kinds;
  const std::string kinds_str = config_.get_string("experiments.ablate_kinds", "LR,RF,GB,AB");
  std::size_t start = 0;
  while (start <= kinds_str.size()) {
    const auto comma = kinds_str.find(',', start);
    const std::string token = kinds_str.substr(start, comma - start);
    if (!token.empty()) kinds.push_back(model_kind_from_name(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const int tune_trials = static_cast<int>(config_.get_int("experiments.tune_trials", 0));
  const int tune_folds = static_cast<int>(config_.get_int("experiments.tune_folds", 3));

  const auto results = run_ablation(
      data.vectors, data.labels, plan, kinds,
      {FeatureSet::application_only, FeatureSet::bank_only, FeatureSet::combined}, fit_options(),
      tune_trials, tune_folds);
  write_file(reports_dir() + "/ablation.csv", results_csv(results));
  write_meta(reports_dir() + "/ablation.csv", "ablate");

  json summary;
  summary["command"] = "ablate";
  summary["results"] = reports_dir() + "/ablation.csv";
  for (const auto& r : results)
    summary["mean_auroc"][std::string(model_kind_name(r.model_kind))]
           [std::string(feature_set_name(r.feature_set))] = r.auroc_mean;
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::string Pipeline::run_report() {
  if (!fs::exists(model_path()))
    raise(Errc::config_invalid, "report needs the model at " + model_path());
  const ScorecardModel model = ScorecardModel::from_json(read_file(model_path()));

  const auto rows = iv_report(model.woe_table);
  write_file(reports_dir() + "/iv_report.csv", iv_csv(rows));
  write_file(reports_dir() + "/iv.svg", svg_iv_bars(rows));
  write_meta(reports_dir() + "/iv_report.csv", "report");

  json summary;
  summary["command"] = "report";
  summary["iv_report"] = reports_dir() + "/iv_report.csv";
  summary["iv_svg"] = reports_dir() + "/iv.svg";
  summary["config_hash"] = config_hash();
  return summary.dump();
}

std::unique_ptr<DecisionService> Pipeline::make_service() {
  return std::make_unique<DecisionService>(service_config(), registry_dir(), logs_dir());
}

}  // namespace cashflow
