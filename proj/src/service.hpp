#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "drift.hpp"
#include "experiments.hpp"
#include "registry.hpp"
#include "statement.hpp"

namespace cashflow {

struct ServiceConfig {
  std::string listen_address = "127.0.0.1";
  int port = 0;  // 0 binds an ephemeral port
  int promote_after = 3;
  double psi_alert_level = 0.2;
  int schedule_interval_days = 365;
  double canary_fraction = 0.0;  // recorded only; no replica routing here
  int min_outcomes_per_class = 5;
  int drift_window = 500;
  PipelineFitOptions fit;
};

struct Decision {
  std::string applicant_id;
  std::optional<RiskRating> bureau_rating;
  RiskRating cashflow_rating;
  RiskRating final;
  std::string model_version;
  std::string decided_at;
  std::optional<double> shadow_pd;  // challenger shadow score, never part of `final`

  std::string to_json() const;
  static Decision from_json(std::string_view text);
};

// Conservative fusion: the higher-risk side wins; a missing bureau rating
// passes the cash-flow rating through.
RiskRating override_rule(const std::optional<RiskRating>& bureau, const RiskRating& cashflow);

enum class RetrainTrigger { scheduled, drift_alert };

struct ScorePayload {
  std::vector<BankStatement> statements;
  ApplicationForm form;
  std::optional<RiskTier> bureau_tier;
  std::string applicant_id;  // defaults to the statements' account id
};

// Scoring, registry governance, drift monitoring and CI retraining behind
// one faсade. Concurrent scoring reads an immutable champion snapshot;
// registry mutations serialize behind a writer lock and swap the snapshot
// atomically. Decision and scored-vector logs are JSON lines with atomic
// appends; both replay after a crash.
class DecisionService {
 public:
  DecisionService(ServiceConfig config, std::string registry_dir, std::string log_dir);

  ModelRegistryEntry register_model(const std::string& artifact_json,
                                    const std::string& created_at);
  void promote(const std::string& version);
  void designate_challenger(const std::string& version);

  // Full pipeline: parse-validated statements -> features -> champion
  // scorecard -> override rule. The decision and the scored vector are
  // logged before the call returns; a challenger scores in shadow.
  Decision score_request(const ScorePayload& payload, const std::string& decided_at);

  // Joins labeled outcomes to logged decisions and appends one paired AUROC
  // evaluation. INSUFFICIENT_OUTCOMES below min_outcomes_per_class.
  ChampionChallengerState evaluate_period(const std::string& period,
                                          const std::vector<std::pair<std::string, int>>& outcomes);

  // PSI of the recent scored window against the champion's training bins.
  DriftReport drift_check_now() const;

  // Refits binning + scorecard on the snapshot's training fold, scores the
  // held-out fold against the champion, registers the candidate, and
  // designates it challenger iff strictly better.
  ModelRegistryEntry ci_retrain(RetrainTrigger trigger,
                                const std::vector<FeatureVector>& snapshot,
                                const std::vector<int>& labels, const std::string& created_at,
                                std::uint64_t seed);

  const ModelRegistry& registry() const { return registry_; }
  ModelRegistry& registry() { return registry_; }
  const ServiceConfig& config() const { return config_; }
  std::vector<Decision> decision_log() const;

 private:
  std::shared_ptr<const ScorecardModel> snapshot(const std::optional<std::string>& version) const;
  void reload_snapshots();

  ServiceConfig config_;
  ModelRegistry registry_;
  std::string log_dir_;

  mutable std::shared_mutex snapshot_mutex_;
  std::shared_ptr<const ScorecardModel> champion_;
  std::shared_ptr<const ScorecardModel> challenger_;

  mutable std::mutex log_mutex_;
  std::vector<Decision> decisions_;
  std::vector<FeatureVector> scored_window_;
};

// HTTP front end over a DecisionService:
//   POST /v1/score                     multipart form + statements, or JSON
//   GET  /v1/models
//   POST /v1/models                    register artifact
//   POST /v1/models/{version}/promote
//   GET  /v1/drift
//   POST /v1/retrain                   {"trigger": "scheduled"|"drift_alert"}
// Runs on a background thread; stop() joins it.
class ServiceHttp {
 public:
  ServiceHttp(DecisionService& service, std::string snapshot_dir);
  ~ServiceHttp();

  int start(const std::string& address, int port);  // returns the bound port
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cashflow
