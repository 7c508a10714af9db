#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "statement.hpp"

namespace cashflow {

// Deterministic synthetic MSME portfolio generator. One seeded stream with a
// fixed draw order: per applicant, latent traits, then form fields, then the
// month-by-month transaction simulation, then the label. Signal weights act
// on standardized latent traits keyed by canonical feature names, so the
// features computed from the generated statements correlate with the true
// log-odds by construction.
struct GeneratorConfig {
  std::uint64_t seed = 42;
  int n_applicants = 611;
  double event_rate_target = 0.152;  // ~ 93/611
  std::map<std::string, double> signal_weights;  // canonical feature name -> weight
  double noise_scale = 0.4;
  int months = 6;

  static GeneratorConfig with_default_signal();
  static std::map<std::string, double> default_signal_weights();
};

struct GroundTruth {
  std::string applicant_id;
  double true_log_odds = 0.0;
  int label = 0;
};

struct Portfolio {
  std::vector<ApplicantRecord> records;
  std::vector<GroundTruth> truths;
};

// Throws INVALID_CONFIG on out-of-range fields or unknown signal-weight
// names.
Portfolio generate_portfolio(const GeneratorConfig& config);

// Writes `statements/<applicant>/<month>.csv`, `forms.csv`, `labels.csv` and
// `ground_truth.csv` under dir. Statements round-trip losslessly through
// parse_statement.
void export_dataset(const Portfolio& portfolio, const std::string& dir);

// Reads an exported dataset back into applicant records (the ingest stage).
// Labels are taken from labels.csv when present.
std::vector<ApplicantRecord> import_dataset(const std::string& dir,
                                            const CategoryRules& rules = CategoryRules::defaults());

// Intercept for the latent log-odds model such that the expected event rate
// under a N(0, signal_sd^2) latent hits `target`. Bisection over a
// Gauss-Legendre-free Simpson quadrature; exposed for tests.
double calibrate_intercept(double target, double signal_sd);

}  // namespace cashflow
