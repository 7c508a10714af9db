#pragma once

#include <map>
#include <string>
#include <vector>

#include "binning.hpp"

namespace cashflow {

struct DriftReport {
  std::map<std::string, double> psi;  // per feature, >= 0
  bool overall_alert = false;
  double alert_level = 0.2;

  std::string to_json() const;
};

// Population stability index over fixed bins with epsilon smoothing:
//   PSI = sum_k (actual_k - expected_k) * ln(actual_k / expected_k).
double psi(const std::vector<double>& expected, const std::vector<double>& actual,
           double epsilon = kDefaultEpsilon);

// Compares the recent window against the table's training-time bin
// distributions over the same bins. EMPTY_WINDOW when the window is empty;
// overall_alert when any feature's PSI reaches alert_level.
DriftReport drift_check(const WoeTable& reference, const std::vector<FeatureVector>& window,
                        double alert_level = 0.2, double epsilon = kDefaultEpsilon);

}  // namespace cashflow
