#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "features.hpp"

namespace cashflow {

struct FeatureStoreKey {
  std::string applicant_id;
  std::string feature_set_version;

  auto operator<=>(const FeatureStoreKey&) const = default;
};

struct FeatureStoreEntry {
  FeatureStoreKey key;
  FeatureVector vector;
  std::optional<int> label;
  std::string written_at;

  std::string to_json_line() const;
  static FeatureStoreEntry from_json_line(std::string_view line);
};

// Append-only JSON-lines feature repository with an in-memory index. One
// writer, many readers; each entry is appended as a single line so readers
// never observe a torn record. Re-writing an existing key is an error.
class FeatureStore {
 public:
  // Opens (creating if absent) and replays the log. A trailing line without
  // a newline terminator is ignored as an interrupted write.
  explicit FeatureStore(std::string path);

  void put(const FeatureStoreEntry& entry);              // DUPLICATE_KEY
  FeatureStoreEntry get(const FeatureStoreKey& key) const;  // NOT_FOUND
  bool contains(const FeatureStoreKey& key) const;
  std::size_t size() const;
  std::vector<FeatureStoreEntry> all() const;  // insertion order

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<FeatureStoreEntry> entries_;
  std::map<FeatureStoreKey, std::size_t> index_;
  mutable std::shared_mutex mutex_;
};

}  // namespace cashflow
