#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "errors.hpp"
#include "jsonl.hpp"

namespace cashflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& raw, int line_no) {
  if (raw.size() < 2 || raw.back() != '"')
    raise(Errc::config_invalid, "line " + std::to_string(line_no) + ": unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) {
      ++i;
      out.push_back(raw[i] == 'n' ? '\n' : raw[i] == 't' ? '\t' : raw[i]);
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config config;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string line = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string::npos) {
      // Keep '#' inside quoted values.
      const auto quote_open = line.find('"');
      if (quote_open == std::string::npos || hash < quote_open) line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        raise(Errc::config_invalid, "line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      raise(Errc::config_invalid, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      raise(Errc::config_invalid, "line " + std::to_string(line_no) + ": empty key or value");
    if (value.front() == '"') value = unquote(value, line_no);

    config.values_[section.empty() ? key : section + "." + key] = value;
  }
  return config;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

void Config::set(const std::string& dotted_key, const std::string& value) {
  values_[dotted_key] = value;
}

bool Config::contains(const std::string& dotted_key) const { return values_.contains(dotted_key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::int64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    raise(Errc::config_invalid, "'" + key + "' must be an integer, got '" + s + "'");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    raise(Errc::config_invalid, "'" + key + "' must be a number, got '" + it->second + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  raise(Errc::config_invalid, "'" + key + "' must be true or false, got '" + it->second + "'");
}

std::map<std::string, double> Config::table_doubles(const std::string& prefix) const {
  std::map<std::string, double> out;
  const std::string full = prefix + ".";
  for (const auto& [key, _] : values_)
    if (key.rfind(full, 0) == 0) out[key.substr(full.size())] = get_double(key, 0.0);
  return out;
}

void Config::apply_env_overrides(const std::vector<std::string>& keys) {
  for (const auto& key : keys) {
    std::string env_name = "CASHFLOW_";
    for (char c : key)
      env_name.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (const char* env = std::getenv(env_name.c_str())) values_[key] = env;
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += " = ";
    out += value;
    out.push_back('\n');
  }
  return out;
}

}  // namespace cashflow
