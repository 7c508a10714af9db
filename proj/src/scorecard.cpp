#include "scorecard.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "errors.hpp"
#include "metrics.hpp"

namespace cashflow {

using nlohmann::json;

std::string_view tier_name(RiskTier t) {
  switch (t) {
    case RiskTier::low: return "Low";
    case RiskTier::medium: return "Medium";
    case RiskTier::high: return "High";
  }
  return "Low";
}

RiskTier tier_from_name(std::string_view name) {
  if (name == "Low") return RiskTier::low;
  if (name == "Medium") return RiskTier::medium;
  if (name == "High") return RiskTier::high;
  raise(Errc::schema_invalid, "unknown risk tier '" + std::string(name) + "'");
}

RiskRating classify_rating(double pd, const RiskThresholds& thresholds) {
  if (!(thresholds.t_low >= 0.0 && thresholds.t_low < thresholds.t_high && thresholds.t_high <= 1.0))
    raise(Errc::invalid_thresholds, "need 0 <= t_low < t_high <= 1");
  RiskRating r;
  r.pd = pd;
  if (pd < thresholds.t_low) r.tier = RiskTier::low;
  else if (pd < thresholds.t_high) r.tier = RiskTier::medium;
  else r.tier = RiskTier::high;
  return r;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

// ---------------------------------------------------------------------------
// objective / gradient

namespace {

// log(1 + e^z) without overflow.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double linear_term(const std::vector<double>& row, double beta0, const std::vector<double>& betas) {
  double z = beta0;
  for (std::size_t j = 0; j < betas.size(); ++j) z += betas[j] * row[j];
  return z;
}

// Solves A x = b for symmetric positive-definite A in place; returns false
// when a pivot degenerates.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (sum <= 1e-12) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= a[i * n + k] * b[k];
    b[i] = sum / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= a[k * n + i] * b[k];
    b[i] = sum / a[i * n + i];
  }
  return true;
}

}  // namespace

double lr_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    double beta0, const std::vector<double>& betas, double lambda) {
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = linear_term(x[i], beta0, betas);
    ll += static_cast<double>(y[i]) * z - log1p_exp(z);
  }
  double penalty = 0.0;
  for (double b : betas) penalty += b * b;
  return ll - lambda * penalty;
}

std::vector<double> lr_gradient(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, double beta0,
                                const std::vector<double>& betas, double lambda) {
  std::vector<double> grad(betas.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double residual = static_cast<double>(y[i]) - sigmoid(linear_term(x[i], beta0, betas));
    grad[0] += residual;
    for (std::size_t j = 0; j < betas.size(); ++j) grad[j + 1] += residual * x[i][j];
  }
  for (std::size_t j = 0; j < betas.size(); ++j) grad[j + 1] -= 2.0 * lambda * betas[j];
  return grad;
}

// ---------------------------------------------------------------------------
// training

ScorecardModel train_scorecard(const std::vector<FeatureVector>& data,
                               const std::vector<int>& labels, const WoeTable& table,
                               const TrainOptions& options, const RiskThresholds& thresholds,
                               const std::string& version, const std::string& trained_at) {
  if (data.size() != labels.size())
    raise(Errc::invalid_param, "data and labels must have equal length");
  if (options.lambda < 0.0) raise(Errc::invalid_param, "lambda must be >= 0");
  long n_bad = 0;
  for (int y : labels) n_bad += y;
  if (n_bad == 0 || n_bad == static_cast<long>(labels.size()))
    raise(Errc::single_class, "training needs both classes");

  const std::size_t d = table.feature_order().size();
  std::vector<std::vector<double>> x;
  x.reserve(data.size());
  for (const auto& v : data) x.push_back(transform_woe(v, table));

  double beta0 = 0.0;
  std::vector<double> betas(d, 0.0);
  double objective = lr_objective(x, labels, beta0, betas, options.lambda);

  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;

  for (; iterations < options.max_iter; ++iterations) {
    const auto grad = lr_gradient(x, labels, beta0, betas, options.lambda);
    grad_norm = 0.0;
    for (double g : grad) grad_norm = std::max(grad_norm, std::abs(g));
    if (grad_norm < options.tol) {
      converged = true;
      break;
    }

    // Newton system on the negated Hessian: (X^T W X + 2 lambda I~) step = grad,
    // intercept unpenalized.
    const std::size_t m = d + 1;
    std::vector<double> hess(m * m, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = sigmoid(linear_term(x[i], beta0, betas));
      const double w = p * (1.0 - p);
      hess[0] += w;
      for (std::size_t j = 0; j < d; ++j) {
        hess[(j + 1) * m] += w * x[i][j];
        for (std::size_t k = 0; k <= j; ++k) hess[(j + 1) * m + (k + 1)] += w * x[i][j] * x[i][k];
      }
    }
    for (std::size_t j = 0; j < d; ++j) hess[(j + 1) * m + (j + 1)] += 2.0 * options.lambda;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) hess[i * m + j] = hess[j * m + i];

    std::vector<double> step = grad;
    std::vector<double> chol = hess;
    if (!cholesky_solve(chol, step, m)) step = grad;  // singular: plain ascent direction

    // Step-halving keeps the objective non-decreasing.
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const double cand0 = beta0 + t * step[0];
      std::vector<double> cand(betas);
      for (std::size_t j = 0; j < d; ++j) cand[j] += t * step[j + 1];
      const double cand_obj = lr_objective(x, labels, cand0, cand, options.lambda);
      if (cand_obj >= objective) {
        beta0 = cand0;
        betas = std::move(cand);
        objective = cand_obj;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // step underflow: gradient is numerically flat
  }

  ScorecardModel model;
  model.version = version;
  model.trained_at = trained_at;
  model.lambda = options.lambda;
  model.beta0 = beta0;
  model.betas = std::move(betas);
  model.feature_order = table.feature_order();
  model.woe_table = table;
  model.thresholds = thresholds;

  std::vector<double> scores;
  scores.reserve(x.size());
  for (const auto& row : x) scores.push_back(linear_term(row, model.beta0, model.betas));
  model.training_metrics["objective"] = objective;
  model.training_metrics["iterations"] = static_cast<double>(iterations);
  model.training_metrics["converged"] = converged ? 1.0 : 0.0;
  model.training_metrics["grad_max_norm"] = grad_norm;
  model.training_metrics["train_auroc"] = auroc(labels, scores);
  return model;
}

double log_odds_woe(const ScorecardModel& model, const std::vector<double>& woe_row) {
  return linear_term(woe_row, model.beta0, model.betas);
}

double predict_proba_woe(const ScorecardModel& model, const std::vector<double>& woe_row) {
  return sigmoid(log_odds_woe(model, woe_row));
}

double log_odds(const ScorecardModel& model, const FeatureVector& vector) {
  return log_odds_woe(model, transform_woe(vector, model.woe_table));
}

double predict_proba(const ScorecardModel& model, const FeatureVector& vector) {
  return sigmoid(log_odds(model, vector));
}

// ---------------------------------------------------------------------------
// artifact serialization

std::string ScorecardModel::to_json() const {
  json j;
  j["version"] = version;
  j["trained_at"] = trained_at;
  j["lambda"] = lambda;
  j["beta0"] = beta0;
  j["betas"] = betas;
  j["feature_order"] = feature_order;
  j["training_metrics"] = training_metrics;
  j["woe_table"] = json::parse(woe_table.to_json());
  j["thresholds"] = {{"t_low", thresholds.t_low}, {"t_high", thresholds.t_high}};
  j["provenance"] = {{"config_hash", provenance.config_hash}, {"seed", provenance.seed}};
  return j.dump();
}

ScorecardModel ScorecardModel::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("model JSON: ") + e.what());
  }
  ScorecardModel m;
  try {
    m.version = j.at("version").get<std::string>();
    m.trained_at = j.at("trained_at").get<std::string>();
    m.lambda = j.at("lambda").get<double>();
    m.beta0 = j.at("beta0").get<double>();
    m.betas = j.at("betas").get<std::vector<double>>();
    m.feature_order = j.at("feature_order").get<std::vector<std::string>>();
    m.training_metrics = j.at("training_metrics").get<std::map<std::string, double>>();
    m.woe_table = WoeTable::from_json(j.at("woe_table").dump());
    m.thresholds.t_low = j.at("thresholds").at("t_low").get<double>();
    m.thresholds.t_high = j.at("thresholds").at("t_high").get<double>();
    if (j.contains("provenance")) {
      m.provenance.config_hash = j["provenance"].value("config_hash", "");
      m.provenance.seed = j["provenance"].value("seed", std::uint64_t{0});
    }
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("model JSON: ") + e.what());
  }
  if (m.betas.size() != m.feature_order.size() ||
      m.feature_order != m.woe_table.feature_order())
    raise(Errc::schema_invalid, "model coefficient/feature shape mismatch");
  if (m.lambda < 0.0) raise(Errc::schema_invalid, "model lambda must be >= 0");
  return m;
}

}  // namespace cashflow
