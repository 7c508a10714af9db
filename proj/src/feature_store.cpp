#include "feature_store.hpp"

#include <fstream>
#include <mutex>

#include <json.hpp>

#include "errors.hpp"
#include "jsonl.hpp"

namespace cashflow {

using nlohmann::json;

std::string FeatureStoreEntry::to_json_line() const {
  json j;
  j["key"] = {{"applicant_id", key.applicant_id},
              {"feature_set_version", key.feature_set_version}};
  j["vector"] = json::parse(vector.to_json());
  if (label)
    j["label"] = *label;
  else
    j["label"] = nullptr;
  j["written_at"] = written_at;
  return j.dump();
}

FeatureStoreEntry FeatureStoreEntry::from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("feature store line: ") + e.what());
  }
  FeatureStoreEntry e;
  e.key.applicant_id = j.at("key").at("applicant_id").get<std::string>();
  e.key.feature_set_version = j.at("key").at("feature_set_version").get<std::string>();
  e.vector = FeatureVector::from_json(j.at("vector").dump());
  if (j.contains("label") && !j["label"].is_null()) e.label = j["label"].get<int>();
  e.written_at = j.at("written_at").get<std::string>();
  return e;
}

FeatureStore::FeatureStore(std::string path) : path_(std::move(path)) {
  for (const auto& line : read_json_lines(path_, /*allow_missing=*/true)) {
    auto entry = FeatureStoreEntry::from_json_line(line);
    if (index_.contains(entry.key))
      raise(Errc::schema_invalid, "feature store log has duplicate key " + entry.key.applicant_id);
    index_[entry.key] = entries_.size();
    entries_.push_back(std::move(entry));
  }
}

void FeatureStore::put(const FeatureStoreEntry& entry) {
  std::unique_lock lock(mutex_);
  if (index_.contains(entry.key))
    raise(Errc::duplicate_key, "feature store already holds (" + entry.key.applicant_id + ", " +
                                   entry.key.feature_set_version + ")");
  append_json_line(path_, entry.to_json_line());
  index_[entry.key] = entries_.size();
  entries_.push_back(entry);
}

FeatureStoreEntry FeatureStore::get(const FeatureStoreKey& key) const {
  std::shared_lock lock(mutex_);
  const auto it = index_.find(key);
  if (it == index_.end())
    raise(Errc::not_found, "no feature store entry for (" + key.applicant_id + ", " +
                               key.feature_set_version + ")");
  return entries_[it->second];
}

bool FeatureStore::contains(const FeatureStoreKey& key) const {
  std::shared_lock lock(mutex_);
  return index_.contains(key);
}

std::size_t FeatureStore::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<FeatureStoreEntry> FeatureStore::all() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

}  // namespace cashflow
