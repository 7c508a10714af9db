#include "drift.hpp"

#include <cmath>

#include <json.hpp>

#include "errors.hpp"

namespace cashflow {

double psi(const std::vector<double>& expected, const std::vector<double>& actual,
           double epsilon) {
  if (expected.size() != actual.size())
    raise(Errc::invalid_param, "psi needs matching bin counts");
  double total = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const double e = expected[k] + epsilon;
    const double a = actual[k] + epsilon;
    total += (a - e) * std::log(a / e);
  }
  return total;
}

DriftReport drift_check(const WoeTable& reference, const std::vector<FeatureVector>& window,
                        double alert_level, double epsilon) {
  if (window.empty()) raise(Errc::empty_window, "drift window is empty");

  DriftReport report;
  report.alert_level = alert_level;

  for (const auto& name : reference.feature_order()) {
    const FeatureWoe& fw = reference.feature(name);
    const long total_ref = reference.n_good_total() + reference.n_bad_total();

    std::vector<double> expected, actual(fw.bins.size(), 0.0);
    expected.reserve(fw.bins.size());
    for (const auto& stats : fw.bins)
      expected.push_back(static_cast<double>(stats.n_good + stats.n_bad) /
                         static_cast<double>(total_ref));

    // Assign window rows to the reference bins.
    for (const auto& vector : window) {
      const auto it = vector.values.find(name);
      std::size_t at = fw.bins.size();
      if (it == vector.values.end()) {
        for (std::size_t k = 0; k < fw.bins.size(); ++k)
          if (fw.bins[k].bin.kind == BinKind::missing) at = k;
      } else if (is_categorical(it->second)) {
        const std::string& code = as_category(it->second);
        std::size_t catch_all = fw.bins.size();
        for (std::size_t k = 0; k < fw.bins.size(); ++k) {
          if (fw.bins[k].bin.contains_category(code)) at = k;
          if (fw.bins[k].bin.catch_all) catch_all = k;
        }
        if (at == fw.bins.size()) at = catch_all;
      } else {
        const double x = as_number(it->second);
        for (std::size_t k = 0; k < fw.bins.size(); ++k)
          if (fw.bins[k].bin.contains_number(x)) at = k;
      }
      if (at == fw.bins.size())
        raise(Errc::unbinned_value, "window value matches no bin of " + name);
      actual[at] += 1.0;
    }
    for (auto& a : actual) a /= static_cast<double>(window.size());

    const double value = psi(expected, actual, epsilon);
    report.psi[name] = value;
    if (value >= alert_level) report.overall_alert = true;
  }
  return report;
}

std::string DriftReport::to_json() const {
  nlohmann::json j;
  j["psi"] = psi;
  j["overall_alert"] = overall_alert;
  j["alert_level"] = alert_level;
  return j.dump();
}

}  // namespace cashflow
