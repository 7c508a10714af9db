#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cashflow {

// Flat TOML-style configuration: `[section]` headers (dotted nesting
// allowed), `key = value` entries with string/integer/float/boolean values
// and `#` comments. Keys address values by dotted path. Covers the pipeline
// and synth config surface without pulling in a full TOML implementation.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  void set(const std::string& dotted_key, const std::string& value);
  bool contains(const std::string& dotted_key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // All `prefix.*` entries as doubles, keyed by the trailing segment.
  std::map<std::string, double> table_doubles(const std::string& prefix) const;

  // Applies CASHFLOW_SECTION_KEY environment overrides (dots become
  // underscores, upper-cased) for the listed keys, present in the file or
  // not.
  void apply_env_overrides(const std::vector<std::string>& keys);

  // Sorted `key = value` lines; hashing this pins provenance.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cashflow
