#include "features.hpp"

#include <cmath>

#include <json.hpp>

#include "errors.hpp"

namespace cashflow {

using nlohmann::json;

std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::account_behaviour: return "account_behaviour";
    case FeatureGroup::repayment_capacity: return "repayment_capacity";
    case FeatureGroup::business_demographics: return "business_demographics";
  }
  return "";
}

std::string_view source_name(FeatureSource s) {
  return s == FeatureSource::application ? "application" : "bank_statement";
}

const std::vector<FeatureSpec>& feature_catalog() {
  static const std::vector<FeatureSpec> catalog = {
      {"app_years_in_business", FeatureGroup::business_demographics, FeatureSource::application, false},
      {"app_location", FeatureGroup::business_demographics, FeatureSource::application, true},
      {"app_sector_code", FeatureGroup::business_demographics, FeatureSource::application, true},
      {"app_num_directors", FeatureGroup::business_demographics, FeatureSource::application, false},
      {"app_director_min_age", FeatureGroup::business_demographics, FeatureSource::application, false},
      {"app_customer_classification", FeatureGroup::business_demographics, FeatureSource::application, true},
      {"app_repayment_capacity", FeatureGroup::repayment_capacity, FeatureSource::application, false},
      {"bank_log_balance_growth", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_mean_avg_balance", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_low_balance_ratio_3m", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_low_high_pct_diff_3m", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_max_avg_balance_3m", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_cashflow_stability", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_deposit_regularity", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_balance_volatility", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_mean_monthly_credits", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
      {"bank_mean_monthly_debits", FeatureGroup::account_behaviour, FeatureSource::bank_statement, false},
  };
  return catalog;
}

const FeatureSpec& feature_spec(std::string_view name) {
  for (const auto& spec : feature_catalog())
    if (spec.name == name) return spec;
  raise(Errc::not_found, "unknown feature '" + std::string(name) + "'");
}

void check_feature_vector(const FeatureVector& v) {
  int app = 0, bank = 0;
  for (const auto& spec : feature_catalog()) {
    const auto it = v.values.find(spec.name);
    if (it == v.values.end())
      raise(Errc::internal, "feature vector missing '" + spec.name + "'");
    if (is_categorical(it->second) != spec.categorical)
      raise(Errc::internal, "feature '" + spec.name + "' has wrong kind");
    (spec.source == FeatureSource::application ? app : bank)++;
  }
  if (app != 7 || bank != 10)
    raise(Errc::internal, "feature catalog split violated");
  if (v.values.size() != feature_catalog().size())
    raise(Errc::internal, "feature vector has extraneous entries");
}

std::string FeatureVector::to_json() const {
  json j;
  j["applicant_id"] = applicant_id;
  j["feature_set_version"] = feature_set_version;
  j["computed_at"] = computed_at;
  json vals = json::object();
  json groups = json::object();
  json sources = json::object();
  for (const auto& [name, value] : values) {
    if (is_categorical(value))
      vals[name] = as_category(value);
    else
      vals[name] = as_number(value);
    const auto& spec = feature_spec(name);
    groups[name] = std::string(group_name(spec.group));
    sources[name] = std::string(source_name(spec.source));
  }
  j["values"] = std::move(vals);
  j["group_tags"] = std::move(groups);
  j["source_tags"] = std::move(sources);
  return j.dump();
}

FeatureVector FeatureVector::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("feature vector JSON: ") + e.what());
  }
  FeatureVector v;
  v.applicant_id = j.at("applicant_id").get<std::string>();
  v.feature_set_version = j.at("feature_set_version").get<std::string>();
  v.computed_at = j.at("computed_at").get<std::string>();
  for (const auto& [name, value] : j.at("values").items()) {
    if (value.is_string())
      v.values[name] = value.get<std::string>();
    else
      v.values[name] = value.get<double>();
  }
  return v;
}

// ---------------------------------------------------------------------------
// bank-statement features

namespace {

// |denominator| < 1 minor unit floors to 1 so every ratio stays finite.
double floor_den(double d) { return std::abs(d) < 1.0 ? 1.0 : d; }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Population standard deviation.
double std_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

MonthlyAggregates monthly_aggregates(const ApplicantRecord& rec) {
  MonthlyAggregates agg;
  for (const auto& s : rec.months) {
    const unsigned days = s.month.days_in_month();
    MinorUnits running = s.opening_balance_minor;
    std::size_t next_txn = 0;
    double eod_sum = 0.0;
    double net = 0.0, credits = 0.0, debits = 0.0;
    int has_credit = 0;
    for (unsigned day = 1; day <= days; ++day) {
      while (next_txn < s.transactions.size() &&
             static_cast<unsigned>(s.transactions[next_txn].txn_date.day()) <= day) {
        const auto& t = s.transactions[next_txn];
        running = t.balance_after_minor;
        net += static_cast<double>(t.amount_minor);
        if (t.amount_minor > 0) {
          credits += static_cast<double>(t.amount_minor);
          has_credit = 1;
        } else {
          debits += static_cast<double>(-t.amount_minor);
        }
        ++next_txn;
      }
      const double eod = static_cast<double>(running);
      eod_sum += eod;
      agg.eod_balances.push_back(eod);
    }
    agg.avg_balance.push_back(eod_sum / static_cast<double>(days));
    agg.net_inflow.push_back(net);
    agg.total_credits.push_back(credits);
    agg.total_debits.push_back(debits);
    agg.months_with_credit.push_back(has_credit);
  }
  return agg;
}

std::map<std::string, FeatureValue> compute_bank_features(const ApplicantRecord& rec) {
  if (rec.months.size() != static_cast<std::size_t>(kRequiredMonths))
    raise(Errc::wrong_month_count, "applicant record must hold 6 months");

  const MonthlyAggregates agg = monthly_aggregates(rec);
  std::map<std::string, FeatureValue> f;

  const double ratio = agg.avg_balance[5] / floor_den(agg.avg_balance[0]);
  f["bank_log_balance_growth"] = ratio > 0.0 ? std::log(ratio) : 0.0;

  const double mean6 = mean_of(agg.avg_balance);
  f["bank_mean_avg_balance"] = mean6;

  // Recent 3 months = months 4..6.
  double low3 = agg.eod_balances.empty() ? 0.0 : agg.eod_balances.back();
  std::size_t day_offset = 0;
  for (int m = 0; m < kRequiredMonths; ++m) {
    const unsigned days = rec.months[static_cast<std::size_t>(m)].month.days_in_month();
    if (m >= 3)
      for (unsigned d = 0; d < days; ++d)
        low3 = std::min(low3, agg.eod_balances[day_offset + d]);
    day_offset += days;
  }
  double high3 = agg.avg_balance[3];
  for (int m = 4; m < kRequiredMonths; ++m)
    high3 = std::max(high3, agg.avg_balance[static_cast<std::size_t>(m)]);

  f["bank_low_balance_ratio_3m"] = low3 / floor_den(mean6);
  f["bank_low_high_pct_diff_3m"] = (high3 - low3) / floor_den(high3);
  f["bank_max_avg_balance_3m"] = high3;

  const double net_mean = mean_of(agg.net_inflow);
  const double net_std = std_of(agg.net_inflow);
  f["bank_cashflow_stability"] = net_mean == 0.0 ? 0.0 : net_std / floor_den(net_mean);

  int credit_months = 0;
  for (int m : agg.months_with_credit) credit_months += m;
  f["bank_deposit_regularity"] = static_cast<double>(credit_months) / 6.0;

  f["bank_balance_volatility"] = std_of(agg.eod_balances);
  f["bank_mean_monthly_credits"] = mean_of(agg.total_credits);
  f["bank_mean_monthly_debits"] = mean_of(agg.total_debits);
  return f;
}

std::map<std::string, FeatureValue> compute_app_features(const ApplicationForm& form,
                                                         const ApplicantRecord& rec) {
  check_form(form);
  std::map<std::string, FeatureValue> f;
  f["app_years_in_business"] = form.years_in_business;
  f["app_location"] = form.location;
  f["app_sector_code"] = form.sector_code;
  f["app_num_directors"] = static_cast<double>(form.num_directors);
  f["app_director_min_age"] = static_cast<double>(form.director_min_age);
  f["app_customer_classification"] = form.customer_classification;

  const MonthlyAggregates agg = monthly_aggregates(rec);
  double net_mean = 0.0;
  for (double n : agg.net_inflow) net_mean += n;
  net_mean /= static_cast<double>(kRequiredMonths);
  f["app_repayment_capacity"] = net_mean / static_cast<double>(form.monthly_installment_minor);
  return f;
}

FeatureVector compute_features(const ApplicantRecord& rec, const std::string& computed_at) {
  FeatureVector v;
  v.applicant_id = rec.applicant_id;
  v.computed_at = computed_at;
  for (auto& [name, value] : compute_app_features(rec.form, rec)) v.values[name] = value;
  for (auto& [name, value] : compute_bank_features(rec)) v.values[name] = value;
  check_feature_vector(v);
  return v;
}

}  // namespace cashflow
