#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "statement.hpp"

namespace cashflow {

enum class FeatureGroup { account_behaviour, repayment_capacity, business_demographics };
enum class FeatureSource { application, bank_statement };

std::string_view group_name(FeatureGroup g);
std::string_view source_name(FeatureSource s);

// Numeric value or categorical code.
using FeatureValue = std::variant<double, std::string>;

inline bool is_categorical(const FeatureValue& v) { return std::holds_alternative<std::string>(v); }
inline double as_number(const FeatureValue& v) { return std::get<double>(v); }
inline const std::string& as_category(const FeatureValue& v) { return std::get<std::string>(v); }

struct FeatureSpec {
  std::string name;
  FeatureGroup group;
  FeatureSource source;
  bool categorical;
};

inline constexpr const char* kFeatureSetVersion = "1.0.0";

// Canonical 17-feature list in fixed order: the 7 application features, then
// the 10 bank-statement features. Also published in features.md.
const std::vector<FeatureSpec>& feature_catalog();
const FeatureSpec& feature_spec(std::string_view name);

struct FeatureVector {
  std::string applicant_id;
  std::map<std::string, FeatureValue> values;
  std::string computed_at;
  std::string feature_set_version = kFeatureSetVersion;

  bool operator==(const FeatureVector&) const = default;

  std::string to_json() const;  // byte-stable, includes group/source tags
  static FeatureVector from_json(std::string_view text);
};

// Enforces the 7+10 source split and one-group-per-feature rule on a
// completed vector.
void check_feature_vector(const FeatureVector& v);

// The 10 bank-statement features. Formulas operate on end-of-day balance
// series built by carrying the prior balance across days without
// transactions. Denominators with |x| < 1 minor unit floor to 1; a zero-mean
// net-inflow series yields stability 0.
std::map<std::string, FeatureValue> compute_bank_features(const ApplicantRecord& rec);

// The 6 pass-through form features plus repayment capacity
// (mean monthly net inflow / monthly installment).
std::map<std::string, FeatureValue> compute_app_features(const ApplicationForm& form,
                                                         const ApplicantRecord& rec);

// Full 17-feature vector; `computed_at` is caller-supplied so pipelines stay
// reproducible.
FeatureVector compute_features(const ApplicantRecord& rec, const std::string& computed_at);

// Intermediate monthly aggregates, exposed for generator construction and
// tests.
struct MonthlyAggregates {
  std::vector<double> avg_balance;      // per month, mean of end-of-day balances
  std::vector<double> net_inflow;       // per month, sum of signed amounts
  std::vector<double> total_credits;    // per month
  std::vector<double> total_debits;     // per month, magnitude
  std::vector<int> months_with_credit;  // 0/1 per month
  std::vector<double> eod_balances;     // all months concatenated
};

MonthlyAggregates monthly_aggregates(const ApplicantRecord& rec);

}  // namespace cashflow
