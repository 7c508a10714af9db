#include "service.hpp"

#include <cmath>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"
#include "jsonl.hpp"
#include "metrics.hpp"
#include "synth.hpp"

namespace cashflow {

namespace fs = std::filesystem;
using nlohmann::json;

RiskRating override_rule(const std::optional<RiskRating>& bureau, const RiskRating& cashflow) {
  if (!bureau) return cashflow;
  return tier_severity(bureau->tier) > tier_severity(cashflow.tier) ? *bureau : cashflow;
}

std::string Decision::to_json() const {
  json j;
  j["applicant_id"] = applicant_id;
  if (bureau_rating)
    j["bureau_rating"] = std::string(tier_name(bureau_rating->tier));
  else
    j["bureau_rating"] = nullptr;
  j["cashflow_rating"] = {{"tier", std::string(tier_name(cashflow_rating.tier))},
                          {"pd", cashflow_rating.pd}};
  j["final"] = std::string(tier_name(final.tier));
  j["final_pd"] = final.pd;
  j["model_version"] = model_version;
  j["decided_at"] = decided_at;
  if (shadow_pd)
    j["shadow_pd"] = *shadow_pd;
  else
    j["shadow_pd"] = nullptr;
  return j.dump();
}

Decision Decision::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("decision: ") + e.what());
  }
  Decision d;
  d.applicant_id = j.at("applicant_id").get<std::string>();
  if (!j.at("bureau_rating").is_null()) {
    RiskRating r;
    r.tier = tier_from_name(j["bureau_rating"].get<std::string>());
    r.pd = std::numeric_limits<double>::quiet_NaN();
    d.bureau_rating = r;
  }
  d.cashflow_rating.tier = tier_from_name(j.at("cashflow_rating").at("tier").get<std::string>());
  d.cashflow_rating.pd = j.at("cashflow_rating").at("pd").get<double>();
  d.final.tier = tier_from_name(j.at("final").get<std::string>());
  d.final.pd = j.at("final_pd").get<double>();
  d.model_version = j.at("model_version").get<std::string>();
  d.decided_at = j.at("decided_at").get<std::string>();
  if (j.contains("shadow_pd") && !j["shadow_pd"].is_null())
    d.shadow_pd = j["shadow_pd"].get<double>();
  return d;
}

// ---------------------------------------------------------------------------

DecisionService::DecisionService(ServiceConfig config, std::string registry_dir,
                                 std::string log_dir)
    : config_(std::move(config)), registry_(std::move(registry_dir)), log_dir_(std::move(log_dir)) {
  fs::create_directories(log_dir_);
  registry_.set_promote_after(config_.promote_after);
  for (const auto& line : read_json_lines(log_dir_ + "/decisions.jsonl", true))
    decisions_.push_back(Decision::from_json(line));
  for (const auto& line : read_json_lines(log_dir_ + "/scored.jsonl", true))
    scored_window_.push_back(FeatureVector::from_json(line));
  reload_snapshots();

  // Startup record. canary_fraction is configuration only; there is no
  // replica routing in this service.
  json startup;
  startup["event"] = "service_start";
  startup["promote_after"] = config_.promote_after;
  startup["psi_alert_level"] = config_.psi_alert_level;
  startup["schedule_interval_days"] = config_.schedule_interval_days;
  startup["canary_fraction"] = config_.canary_fraction;
  startup["t_low"] = config_.fit.thresholds.t_low;
  startup["t_high"] = config_.fit.thresholds.t_high;
  append_json_line(log_dir_ + "/service.jsonl", startup.dump());
}

void DecisionService::reload_snapshots() {
  std::unique_lock lock(snapshot_mutex_);
  const auto champion = registry_.champion_version();
  champion_ = champion ? std::make_shared<const ScorecardModel>(registry_.load_model(*champion))
                       : nullptr;
  const auto challenger = registry_.state().challenger;
  challenger_ = challenger
                    ? std::make_shared<const ScorecardModel>(registry_.load_model(*challenger))
                    : nullptr;
}

ModelRegistryEntry DecisionService::register_model(const std::string& artifact_json,
                                                   const std::string& created_at) {
  const auto entry = registry_.register_model(artifact_json, created_at);
  return entry;
}

void DecisionService::promote(const std::string& version) {
  registry_.promote(version);
  reload_snapshots();  // in-flight requests keep the previous snapshot
}

void DecisionService::designate_challenger(const std::string& version) {
  registry_.designate_challenger(version);
  reload_snapshots();
}

std::shared_ptr<const ScorecardModel> DecisionService::snapshot(
    const std::optional<std::string>&) const {
  std::shared_lock lock(snapshot_mutex_);
  return champion_;
}

Decision DecisionService::score_request(const ScorePayload& payload,
                                        const std::string& decided_at) {
  std::shared_ptr<const ScorecardModel> champion;
  std::shared_ptr<const ScorecardModel> challenger;
  {
    std::shared_lock lock(snapshot_mutex_);
    champion = champion_;
    challenger = challenger_;
  }
  if (!champion) raise(Errc::no_champion, "no champion model is deployed");

  auto statements = deduplicate(payload.statements);
  ApplicantRecord record = assemble_validated(std::move(statements), payload.form);
  if (!payload.applicant_id.empty()) record.applicant_id = payload.applicant_id;

  const FeatureVector vector = compute_features(record, decided_at);
  const double pd = predict_proba(*champion, vector);

  Decision decision;
  decision.applicant_id = record.applicant_id;
  // Rating cutoffs are service configuration; the artifact's embedded
  // thresholds record what training assumed.
  decision.cashflow_rating = classify_rating(pd, config_.fit.thresholds);
  if (payload.bureau_tier) {
    RiskRating bureau;
    bureau.tier = *payload.bureau_tier;
    bureau.pd = std::numeric_limits<double>::quiet_NaN();
    decision.bureau_rating = bureau;
  }
  decision.final = override_rule(decision.bureau_rating, decision.cashflow_rating);
  decision.model_version = champion->version;
  decision.decided_at = decided_at;
  if (challenger) decision.shadow_pd = predict_proba(*challenger, vector);

  {
    std::lock_guard lock(log_mutex_);
    append_json_line(log_dir_ + "/decisions.jsonl", decision.to_json());
    append_json_line(log_dir_ + "/scored.jsonl", vector.to_json());
    decisions_.push_back(decision);
    scored_window_.push_back(vector);
  }
  return decision;
}

ChampionChallengerState DecisionService::evaluate_period(
    const std::string& period, const std::vector<std::pair<std::string, int>>& outcomes) {
  if (!registry_.state().challenger) raise(Errc::not_found, "no challenger under evaluation");

  // Join outcomes to the latest decision per applicant that carries a
  // shadow score, all under the log lock.
  std::vector<int> labels;
  std::vector<double> champion_scores, challenger_scores;
  long pos = 0, neg = 0;
  {
    std::lock_guard lock(log_mutex_);
    std::map<std::string, const Decision*> latest;
    for (const auto& d : decisions_)
      if (d.shadow_pd) latest[d.applicant_id] = &d;
    for (const auto& [applicant_id, label] : outcomes) {
      const auto it = latest.find(applicant_id);
      if (it == latest.end()) continue;
      labels.push_back(label);
      champion_scores.push_back(it->second->cashflow_rating.pd);
      challenger_scores.push_back(*it->second->shadow_pd);
      (label == 1 ? pos : neg)++;
    }
  }
  if (pos < config_.min_outcomes_per_class || neg < config_.min_outcomes_per_class)
    raise(Errc::insufficient_outcomes,
          "need at least " + std::to_string(config_.min_outcomes_per_class) +
              " outcomes per class, got " + std::to_string(pos) + "/" + std::to_string(neg));

  const double champion_auroc = auroc(labels, champion_scores);
  const double challenger_auroc = auroc(labels, challenger_scores);
  return registry_.record_evaluation(period, champion_auroc, challenger_auroc);
}

DriftReport DecisionService::drift_check_now() const {
  std::shared_ptr<const ScorecardModel> champion;
  {
    std::shared_lock lock(snapshot_mutex_);
    champion = champion_;
  }
  if (!champion) raise(Errc::no_champion, "no champion model is deployed");

  std::vector<FeatureVector> window;
  {
    std::lock_guard lock(log_mutex_);
    const std::size_t n = scored_window_.size();
    const auto take = std::min<std::size_t>(n, static_cast<std::size_t>(config_.drift_window));
    window.assign(scored_window_.end() - static_cast<std::ptrdiff_t>(take), scored_window_.end());
  }
  return drift_check(champion->woe_table, window, config_.psi_alert_level, config_.fit.epsilon);
}

ModelRegistryEntry DecisionService::ci_retrain(RetrainTrigger /*trigger*/,
                                               const std::vector<FeatureVector>& snapshot,
                                               const std::vector<int>& labels,
                                               const std::string& created_at, std::uint64_t seed) {
  std::shared_ptr<const ScorecardModel> champion;
  {
    std::shared_lock lock(snapshot_mutex_);
    champion = champion_;
  }
  if (!champion) raise(Errc::no_champion, "retraining compares against a deployed champion");

  const auto split = stratified_split(labels, 0.60, seed);
  std::vector<FeatureVector> train_x, valid_x;
  std::vector<int> train_y, valid_y;
  for (std::size_t i : split.train) {
    train_x.push_back(snapshot[i]);
    train_y.push_back(labels[i]);
  }
  for (std::size_t i : split.valid) {
    valid_x.push_back(snapshot[i]);
    valid_y.push_back(labels[i]);
  }

  const auto features = features_for(FeatureSet::combined);
  const SplitId split_id = SplitId::train("retrain@" + std::to_string(seed));
  const WoeTable table = fit_woe_table(train_x, train_y, features, config_.fit, split_id);
  ScorecardModel candidate =
      train_scorecard(train_x, train_y, table, config_.fit.train, config_.fit.thresholds,
                      next_version(registry_), created_at);

  std::vector<double> cand_scores, champ_scores;
  for (const auto& v : valid_x) {
    cand_scores.push_back(predict_proba(candidate, v));
    champ_scores.push_back(predict_proba(*champion, v));
  }
  const double cand_auroc = auroc(valid_y, cand_scores);
  const double champ_auroc = auroc(valid_y, champ_scores);
  candidate.training_metrics["holdout_auroc"] = cand_auroc;
  candidate.training_metrics["champion_holdout_auroc"] = champ_auroc;

  const auto entry = registry_.register_model(
      candidate.to_json(), created_at,
      {{"holdout_auroc", cand_auroc}, {"champion_holdout_auroc", champ_auroc}});
  if (cand_auroc > champ_auroc) {
    registry_.designate_challenger(entry.version);
    reload_snapshots();
  }
  return registry_.entry(entry.version);
}

std::vector<Decision> DecisionService::decision_log() const {
  std::lock_guard lock(log_mutex_);
  return decisions_;
}

// ---------------------------------------------------------------------------
// HTTP front end

namespace {

int http_status_for(Errc code) {
  switch (code) {
    case Errc::no_champion: return 503;
    case Errc::not_found: return 404;
    case Errc::duplicate_artifact: return 409;
    case Errc::invalid_transition: return 409;
    case Errc::insufficient_outcomes: return 422;
    case Errc::empty_window: return 422;
    default: return 400;
  }
}

void reply_error(httplib::Response& res, const Error& e) {
  json j;
  j["error"] = std::string(errc_name(e.code()));
  j["message"] = e.what();
  res.status = http_status_for(e.code());
  res.set_content(j.dump(), "application/json");
}

std::string now_iso8601() {
  const auto t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ApplicationForm form_from_json(const json& j) {
  ApplicationForm form;
  form.years_in_business = j.at("years_in_business").get<double>();
  form.location = j.at("location").get<std::string>();
  form.sector_code = j.at("sector_code").get<std::string>();
  form.num_directors = j.at("num_directors").get<int>();
  form.director_min_age = j.at("director_min_age").get<int>();
  form.customer_classification = j.at("customer_classification").get<std::string>();
  form.monthly_installment_minor = parse_money(j.at("monthly_installment").get<std::string>());
  return form;
}

ScorePayload payload_from_multipart(const httplib::Request& req) {
  ScorePayload payload;
  bool have_form = false;
  for (const auto& [name, part] : req.files) {
    if (name == "form") {
      json j;
      try {
        j = json::parse(part.content);
      } catch (const json::exception& e) {
        raise(Errc::schema_invalid, std::string("form part: ") + e.what());
      }
      payload.form = form_from_json(j);
      if (j.contains("bureau_rating") && !j["bureau_rating"].is_null())
        payload.bureau_tier = tier_from_name(j["bureau_rating"].get<std::string>());
      if (j.contains("applicant_id")) payload.applicant_id = j["applicant_id"].get<std::string>();
      have_form = true;
    } else if (name == "statement") {
      if (!part.filename.empty() && part.filename.ends_with(".csv")) {
        // CSV parts carry their context in the filename: <account>_<month>.csv
        const std::string stem = part.filename.substr(0, part.filename.size() - 4);
        const auto sep = stem.rfind('_');
        if (sep == std::string::npos)
          raise(Errc::malformed_row, "CSV statement filename must be <account>_<YYYY-MM>.csv");
        CsvContext context;
        context.account_id = stem.substr(0, sep);
        context.month = parse_year_month(stem.substr(sep + 1));
        payload.statements.push_back(
            parse_statement(part.content, StatementFormat::csv, context));
      } else {
        payload.statements.push_back(parse_statement(part.content, StatementFormat::json));
      }
    }
  }
  if (!have_form) raise(Errc::config_invalid, "multipart score request needs a 'form' part");
  if (payload.statements.empty())
    raise(Errc::config_invalid, "score request carries no statements");
  return payload;
}

ScorePayload payload_from_json_body(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("score request: ") + e.what());
  }
  ScorePayload payload;
  const json& form = j.at("form");
  payload.form = form_from_json(form);
  // bureau_rating and applicant_id ride on the form document, matching the
  // multipart dialect; top-level values win when both are present.
  for (const json* scope : std::initializer_list<const json*>{&form, &j}) {
    if (scope->contains("bureau_rating") && !(*scope)["bureau_rating"].is_null())
      payload.bureau_tier = tier_from_name((*scope)["bureau_rating"].get<std::string>());
    if (scope->contains("applicant_id"))
      payload.applicant_id = (*scope)["applicant_id"].get<std::string>();
  }
  for (const auto& s : j.at("statements"))
    payload.statements.push_back(parse_statement(s.dump(), StatementFormat::json));
  return payload;
}

}  // namespace

struct ServiceHttp::Impl {
  DecisionService& service;
  std::string snapshot_dir;
  httplib::Server server;
  std::thread worker;
  int port = 0;

  explicit Impl(DecisionService& s, std::string snap) : service(s), snapshot_dir(std::move(snap)) {}
};

ServiceHttp::ServiceHttp(DecisionService& service, std::string snapshot_dir)
    : impl_(std::make_unique<Impl>(service, std::move(snapshot_dir))) {
  auto& server = impl_->server;
  auto& service_ref = impl_->service;

  server.Post("/v1/score", [&service_ref](const httplib::Request& req, httplib::Response& res) {
    try {
      const ScorePayload payload = req.is_multipart_form_data()
                                       ? payload_from_multipart(req)
                                       : payload_from_json_body(req.body);
      const Decision decision = service_ref.score_request(payload, now_iso8601());
      res.set_content(decision.to_json(), "application/json");
    } catch (const Error& e) {
      reply_error(res, e);
    }
  });

  server.Get("/v1/models", [&service_ref](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& e : service_ref.registry().entries()) {
      json je;
      je["version"] = e.version;
      je["artifact_hash"] = e.artifact_hash;
      je["created_at"] = e.created_at;
      je["status"] = std::string(status_name(e.status));
      je["metrics"] = e.metrics;
      out.push_back(std::move(je));
    }
    res.set_content(out.dump(), "application/json");
  });

  server.Post("/v1/models", [&service_ref](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto entry = service_ref.register_model(req.body, now_iso8601());
      json j;
      j["version"] = entry.version;
      j["artifact_hash"] = entry.artifact_hash;
      j["status"] = std::string(status_name(entry.status));
      res.status = 201;
      res.set_content(j.dump(), "application/json");
    } catch (const Error& e) {
      reply_error(res, e);
    }
  });

  server.Post(R"(/v1/models/([^/]+)/promote)",
              [&service_ref](const httplib::Request& req, httplib::Response& res) {
                try {
                  service_ref.promote(req.matches[1]);
                  json j;
                  j["champion"] = req.matches[1].str();
                  res.set_content(j.dump(), "application/json");
                } catch (const Error& e) {
                  reply_error(res, e);
                }
              });

  server.Get("/v1/drift", [&service_ref](const httplib::Request&, httplib::Response& res) {
    try {
      res.set_content(service_ref.drift_check_now().to_json(), "application/json");
    } catch (const Error& e) {
      reply_error(res, e);
    }
  });

  server.Post("/v1/retrain", [this](const httplib::Request& req, httplib::Response& res) {
    auto& svc = impl_->service;
    try {
      RetrainTrigger trigger = RetrainTrigger::scheduled;
      std::string snapshot_dir = impl_->snapshot_dir;
      if (!req.body.empty()) {
        const json j = json::parse(req.body, nullptr, false);
        if (!j.is_discarded()) {
          if (j.contains("trigger") && j["trigger"] == "drift_alert")
            trigger = RetrainTrigger::drift_alert;
          if (j.contains("snapshot_dir")) snapshot_dir = j["snapshot_dir"].get<std::string>();
        }
      }
      if (snapshot_dir.empty())
        raise(Errc::config_invalid, "no snapshot directory configured for retraining");
      const auto records = import_dataset(snapshot_dir);
      std::vector<FeatureVector> vectors;
      std::vector<int> labels;
      for (const auto& rec : records) {
        if (!rec.label) continue;
        vectors.push_back(compute_features(rec, now_iso8601()));
        labels.push_back(*rec.label);
      }
      long pos = 0;
      for (int y : labels) pos += y;
      if (labels.empty() || pos == 0 || pos == static_cast<long>(labels.size()))
        raise(Errc::single_class, "snapshot lacks labeled outcomes of both classes");
      const auto entry = svc.ci_retrain(trigger, vectors, labels, now_iso8601(), 1);
      json j;
      j["version"] = entry.version;
      j["status"] = std::string(status_name(entry.status));
      j["metrics"] = entry.metrics;
      res.status = 201;
      res.set_content(j.dump(), "application/json");
    } catch (const Error& e) {
      reply_error(res, e);
    }
  });
}

ServiceHttp::~ServiceHttp() { stop(); }

int ServiceHttp::start(const std::string& address, int port) {
  auto& server = impl_->server;
  if (port == 0) {
    impl_->port = server.bind_to_any_port(address);
  } else {
    if (!server.bind_to_port(address, port))
      raise(Errc::io_error, "cannot bind " + address + ":" + std::to_string(port));
    impl_->port = port;
  }
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  server.wait_until_ready();
  return impl_->port;
}

void ServiceHttp::stop() {
  if (impl_->worker.joinable()) {
    impl_->server.stop();
    impl_->worker.join();
  }
}

}  // namespace cashflow
