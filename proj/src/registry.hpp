#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scorecard.hpp"

namespace cashflow {

enum class ModelStatus { candidate, challenger, champion, retired };

std::string_view status_name(ModelStatus s);

struct ModelRegistryEntry {
  std::string version;
  std::string artifact_hash;  // sha256 of the model document bytes
  std::string created_at;
  ModelStatus status = ModelStatus::candidate;
  std::map<std::string, double> metrics;
};

struct PairedEvaluation {
  std::string period;
  double champion_metric = 0.0;
  double challenger_metric = 0.0;
};

struct ChampionChallengerState {
  std::optional<std::string> champion;
  std::optional<std::string> challenger;
  std::vector<PairedEvaluation> window;
  int promote_after = 3;
  int consecutive_wins = 0;
  bool promotion_ready = false;
};

// Append-only, replayable model registry. Every mutation appends one event
// line; rebuilding from the log yields the same state (a torn tail line from
// a crash is dropped on replay). Status only moves forward along
// candidate -> challenger -> champion -> retired. Exactly one champion holds
// after bootstrap and at most one challenger at a time.
class ModelRegistry {
 public:
  // `dir` holds events.jsonl plus one artifact file per registered model.
  explicit ModelRegistry(std::string dir);

  // Validates the document, content-addresses it, persists it and appends a
  // register event with status=candidate. DUPLICATE_ARTIFACT when the hash
  // is already present; SCHEMA_INVALID on a malformed document.
  ModelRegistryEntry register_model(const std::string& artifact_json,
                                    const std::string& created_at,
                                    const std::map<std::string, double>& metrics = {});

  // Forward transitions. Promoting a candidate passes through challenger;
  // the outgoing champion retires in the same promotion.
  void designate_challenger(const std::string& version);
  void promote(const std::string& version);
  void retire(const std::string& version);

  // Appends a paired evaluation; strict challenger wins accumulate and
  // promote_after consecutive wins raise promotion_ready (promotion itself
  // stays an explicit call). Ties count for the champion and reset the run.
  ChampionChallengerState record_evaluation(const std::string& period, double champion_metric,
                                            double challenger_metric);

  const ChampionChallengerState& state() const { return state_; }
  void set_promote_after(int n);

  std::vector<ModelRegistryEntry> entries() const;  // registration order
  const ModelRegistryEntry& entry(const std::string& version) const;
  bool has_version(const std::string& version) const;

  std::optional<std::string> champion_version() const { return state_.champion; }
  std::string artifact_json(const std::string& version) const;
  ScorecardModel load_model(const std::string& version) const;

  const std::string& dir() const { return dir_; }

 private:
  void append_event(const std::string& line);
  void apply_event(const std::string& line);
  void transition(const std::string& version, ModelStatus to);

  std::string dir_;
  std::vector<std::string> order_;
  std::map<std::string, ModelRegistryEntry> by_version_;
  std::map<std::string, std::string> hash_to_version_;
  ChampionChallengerState state_;
};

// Allocates the next "vN" version given existing entries.
std::string next_version(const ModelRegistry& registry);

}  // namespace cashflow
