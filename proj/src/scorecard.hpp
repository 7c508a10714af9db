#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "binning.hpp"

namespace cashflow {

enum class RiskTier { low, medium, high };

std::string_view tier_name(RiskTier t);
RiskTier tier_from_name(std::string_view name);

// Low < Medium < High; used by the decision engine's max-severity override.
inline int tier_severity(RiskTier t) { return static_cast<int>(t); }

struct RiskRating {
  RiskTier tier = RiskTier::low;
  double pd = 0.0;
};

struct RiskThresholds {
  double t_low = 0.05;
  double t_high = 0.15;
};

// pd < t_low -> Low, pd < t_high -> Medium, else High.
RiskRating classify_rating(double pd, const RiskThresholds& thresholds);

struct TrainOptions {
  double lambda = 1.0;
  double tol = 1e-8;
  int max_iter = 100;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
};

// L2-penalized logistic regression over WOE-transformed features. The
// embedded WoeTable makes the artifact self-contained: a raw FeatureVector
// scores through transform_woe then the linear model.
struct ScorecardModel {
  std::string version;
  std::string trained_at;
  double lambda = 0.0;
  double beta0 = 0.0;
  std::vector<double> betas;  // one per feature, table order
  std::vector<std::string> feature_order;
  WoeTable woe_table;
  std::map<std::string, double> training_metrics;
  RiskThresholds thresholds;
  Provenance provenance;

  std::string to_json() const;  // the registry content-addresses these bytes
  static ScorecardModel from_json(std::string_view text);
};

// Maximizes sum_i [y_i log p_i + (1-y_i) log(1-p_i)] - lambda * ||beta||^2
// (intercept unpenalized) by damped Newton from beta = 0, falling back to
// gradient ascent when the system is singular. Deterministic; records
// objective, iterations, convergence flag and training AUROC.
ScorecardModel train_scorecard(const std::vector<FeatureVector>& data,
                               const std::vector<int>& labels, const WoeTable& table,
                               const TrainOptions& options = {},
                               const RiskThresholds& thresholds = {},
                               const std::string& version = "0.0.0",
                               const std::string& trained_at = {});

// Numerically stable sigmoid; exact 0/1 saturation instead of overflow.
double sigmoid(double z);
double logit(double p);

double log_odds(const ScorecardModel& model, const FeatureVector& vector);
double predict_proba(const ScorecardModel& model, const FeatureVector& vector);

// Hot path for pre-transformed rows (experiments, CV loops).
double log_odds_woe(const ScorecardModel& model, const std::vector<double>& woe_row);
double predict_proba_woe(const ScorecardModel& model, const std::vector<double>& woe_row);

// Penalized log-likelihood and its analytic gradient at an arbitrary
// coefficient point; exposed for the finite-difference checks.
double lr_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    double beta0, const std::vector<double>& betas, double lambda);
std::vector<double> lr_gradient(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, double beta0,
                                const std::vector<double>& betas, double lambda);

}  // namespace cashflow
