#include "registry.hpp"

#include <filesystem>

#include <json.hpp>

#include "errors.hpp"
#include "jsonl.hpp"
#include "sha256.hpp"

namespace cashflow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view status_name(ModelStatus s) {
  switch (s) {
    case ModelStatus::candidate: return "candidate";
    case ModelStatus::challenger: return "challenger";
    case ModelStatus::champion: return "champion";
    case ModelStatus::retired: return "retired";
  }
  return "candidate";
}

namespace {

ModelStatus status_from_name(std::string_view name) {
  if (name == "candidate") return ModelStatus::candidate;
  if (name == "challenger") return ModelStatus::challenger;
  if (name == "champion") return ModelStatus::champion;
  if (name == "retired") return ModelStatus::retired;
  raise(Errc::schema_invalid, "unknown status '" + std::string(name) + "'");
}

bool forward_transition(ModelStatus from, ModelStatus to) {
  return static_cast<int>(to) > static_cast<int>(from);
}

}  // namespace

ModelRegistry::ModelRegistry(std::string dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  for (const auto& line : read_json_lines(dir_ + "/events.jsonl", /*allow_missing=*/true))
    apply_event(line);
}

void ModelRegistry::append_event(const std::string& line) {
  append_json_line(dir_ + "/events.jsonl", line);
}

void ModelRegistry::apply_event(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("registry event: ") + e.what());
  }
  const std::string type = j.at("event").get<std::string>();
  if (type == "register") {
    ModelRegistryEntry entry;
    entry.version = j.at("version").get<std::string>();
    entry.artifact_hash = j.at("artifact_hash").get<std::string>();
    entry.created_at = j.at("created_at").get<std::string>();
    entry.status = ModelStatus::candidate;
    if (j.contains("metrics"))
      entry.metrics = j["metrics"].get<std::map<std::string, double>>();
    order_.push_back(entry.version);
    hash_to_version_[entry.artifact_hash] = entry.version;
    by_version_[entry.version] = std::move(entry);
  } else if (type == "transition") {
    const std::string version = j.at("version").get<std::string>();
    const ModelStatus to = status_from_name(j.at("to").get<std::string>());
    auto it = by_version_.find(version);
    if (it == by_version_.end())
      raise(Errc::schema_invalid, "transition for unknown version " + version);
    it->second.status = to;
    if (to == ModelStatus::champion) {
      state_.champion = version;
      if (state_.challenger == version) state_.challenger.reset();
      state_.consecutive_wins = 0;
      state_.promotion_ready = false;
      state_.window.clear();
    } else if (to == ModelStatus::challenger) {
      state_.challenger = version;
      state_.consecutive_wins = 0;
      state_.promotion_ready = false;
    } else if (to == ModelStatus::retired) {
      if (state_.challenger == version) state_.challenger.reset();
      if (state_.champion == version) state_.champion.reset();
    }
  } else if (type == "evaluation") {
    PairedEvaluation eval;
    eval.period = j.at("period").get<std::string>();
    eval.champion_metric = j.at("champion_metric").get<double>();
    eval.challenger_metric = j.at("challenger_metric").get<double>();
    state_.window.push_back(eval);
    if (eval.challenger_metric > eval.champion_metric)
      state_.consecutive_wins += 1;
    else
      state_.consecutive_wins = 0;  // ties favour the champion
    state_.promotion_ready = state_.consecutive_wins >= state_.promote_after;
  } else if (type == "config") {
    state_.promote_after = j.at("promote_after").get<int>();
  } else {
    raise(Errc::schema_invalid, "unknown registry event '" + type + "'");
  }
}

ModelRegistryEntry ModelRegistry::register_model(const std::string& artifact_json,
                                                 const std::string& created_at,
                                                 const std::map<std::string, double>& metrics) {
  // Parse-validate before anything touches disk.
  const ScorecardModel model = ScorecardModel::from_json(artifact_json);
  const std::string hash = sha256_hex(artifact_json);
  if (hash_to_version_.contains(hash))
    raise(Errc::duplicate_artifact,
          "artifact already registered as " + hash_to_version_.at(hash));
  std::string version = model.version;
  if (version.empty() || by_version_.contains(version))
    raise(Errc::schema_invalid, "model version '" + version + "' empty or already registered");

  write_file(dir_ + "/" + version + ".model.json", artifact_json);

  json event;
  event["event"] = "register";
  event["version"] = version;
  event["artifact_hash"] = hash;
  event["created_at"] = created_at;
  event["metrics"] = metrics;
  const std::string line = event.dump();
  append_event(line);
  apply_event(line);
  return by_version_.at(version);
}

void ModelRegistry::transition(const std::string& version, ModelStatus to) {
  const auto it = by_version_.find(version);
  if (it == by_version_.end()) raise(Errc::not_found, "unknown model version " + version);
  if (!forward_transition(it->second.status, to))
    raise(Errc::invalid_transition,
          std::string("cannot move ") + version + " from " +
              std::string(status_name(it->second.status)) + " to " + std::string(status_name(to)));
  json event;
  event["event"] = "transition";
  event["version"] = version;
  event["to"] = std::string(status_name(to));
  const std::string line = event.dump();
  append_event(line);
  apply_event(line);
}

void ModelRegistry::designate_challenger(const std::string& version) {
  if (state_.challenger && *state_.challenger != version)
    raise(Errc::invalid_transition,
          "a challenger already exists (" + *state_.challenger + "); retire it first");
  transition(version, ModelStatus::challenger);
}

void ModelRegistry::promote(const std::string& version) {
  const auto it = by_version_.find(version);
  if (it == by_version_.end()) raise(Errc::not_found, "unknown model version " + version);
  if (it->second.status == ModelStatus::candidate) {
    if (state_.challenger)
      raise(Errc::invalid_transition,
            "a challenger already exists (" + *state_.challenger + "); retire it first");
    transition(version, ModelStatus::challenger);
  }
  const auto outgoing = state_.champion;
  transition(version, ModelStatus::champion);
  if (outgoing && *outgoing != version) transition(*outgoing, ModelStatus::retired);
}

void ModelRegistry::retire(const std::string& version) {
  if (state_.champion == version)
    raise(Errc::invalid_transition, "the champion leaves only by being replaced in a promotion");
  transition(version, ModelStatus::retired);
}

ChampionChallengerState ModelRegistry::record_evaluation(const std::string& period,
                                                          double champion_metric,
                                                          double challenger_metric) {
  if (!state_.champion) raise(Errc::no_champion, "no champion to evaluate against");
  if (!state_.challenger) raise(Errc::not_found, "no challenger under evaluation");
  json event;
  event["event"] = "evaluation";
  event["period"] = period;
  event["champion_metric"] = champion_metric;
  event["challenger_metric"] = challenger_metric;
  const std::string line = event.dump();
  append_event(line);
  apply_event(line);
  return state_;
}

void ModelRegistry::set_promote_after(int n) {
  if (n < 1) raise(Errc::invalid_param, "promote_after must be >= 1");
  if (n == state_.promote_after) return;
  json event;
  event["event"] = "config";
  event["promote_after"] = n;
  const std::string line = event.dump();
  append_event(line);
  apply_event(line);
}

std::vector<ModelRegistryEntry> ModelRegistry::entries() const {
  std::vector<ModelRegistryEntry> out;
  out.reserve(order_.size());
  for (const auto& version : order_) out.push_back(by_version_.at(version));
  return out;
}

const ModelRegistryEntry& ModelRegistry::entry(const std::string& version) const {
  const auto it = by_version_.find(version);
  if (it == by_version_.end()) raise(Errc::not_found, "unknown model version " + version);
  return it->second;
}

bool ModelRegistry::has_version(const std::string& version) const {
  return by_version_.contains(version);
}

std::string ModelRegistry::artifact_json(const std::string& version) const {
  if (!by_version_.contains(version)) raise(Errc::not_found, "unknown model version " + version);
  return read_file(dir_ + "/" + version + ".model.json");
}

ScorecardModel ModelRegistry::load_model(const std::string& version) const {
  return ScorecardModel::from_json(artifact_json(version));
}

std::string next_version(const ModelRegistry& registry) {
  int highest = 0;
  for (const auto& e : registry.entries())
    if (e.version.size() > 1 && e.version.front() == 'v')
      highest = std::max(highest, std::atoi(e.version.c_str() + 1));
  return "v" + std::to_string(highest + 1);
}

}  // namespace cashflow
