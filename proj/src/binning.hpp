#pragma once

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "features.hpp"

namespace cashflow {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kWoeClamp = 5.0;
inline constexpr int kDefaultInitialBins = 10;
inline constexpr int kDefaultMinBinCount = 5;

enum class BinKind { interval, category_group, missing };

// One bin of one feature. Interval bins are lower-inclusive,
// upper-exclusive; a full interval set partitions the real line. Category
// groups partition the observed codes; the pooled rare group is marked
// catch_all and also absorbs codes unseen at fit time.
struct BinDefinition {
  std::string feature;
  BinKind kind = BinKind::interval;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::vector<std::string> members;  // sorted, category_group only
  bool catch_all = false;

  bool contains_number(double x) const { return kind == BinKind::interval && x >= lower && x < upper; }
  bool contains_category(const std::string& code) const;
  std::string label() const;
};

struct BinStats {
  BinDefinition bin;
  long n_good = 0;
  long n_bad = 0;
  double dist_good = 0.0;
  double dist_bad = 0.0;
  double woe = 0.0;
};

enum class IvClass { not_predictive, weak, medium, strong, suspicious };

std::string_view iv_class_name(IvClass c);
IvClass classify_iv(double iv);

// Identifies the data slice a table was fitted on. WOE/IV computation is
// restricted to training folds; naming a validation split (or the full
// dataset) is a hard error.
struct SplitId {
  enum class Role { train, validation, full, test };
  Role role = Role::train;
  std::string label;

  static SplitId train(std::string label) { return {Role::train, std::move(label)}; }
  std::string str() const;
  static SplitId parse(std::string_view text);
};

struct FeatureWoe {
  std::string feature;
  std::vector<BinStats> bins;  // fit order; missing bin last
  double iv = 0.0;
  IvClass iv_class = IvClass::not_predictive;
};

class WoeTable {
 public:
  WoeTable() = default;

  double epsilon() const { return epsilon_; }
  double clamp() const { return clamp_; }
  const std::string& trained_on() const { return trained_on_; }
  long n_good_total() const { return n_good_total_; }
  long n_bad_total() const { return n_bad_total_; }

  const std::vector<std::string>& feature_order() const { return feature_order_; }
  const FeatureWoe& feature(std::string_view name) const;
  bool has_feature(std::string_view name) const;

  double woe_of(std::string_view feature, const FeatureValue& value) const;
  double iv_of(std::string_view feature) const { return this->feature(feature).iv; }

  std::string to_json() const;
  static WoeTable from_json(std::string_view text);

  friend WoeTable compute_woe_table(const std::vector<std::pair<std::string, std::vector<BinDefinition>>>&,
                                    const std::vector<FeatureVector>&, const std::vector<int>&,
                                    double, const SplitId&);

 private:
  double epsilon_ = kDefaultEpsilon;
  double clamp_ = kWoeClamp;
  std::string trained_on_;
  long n_good_total_ = 0;
  long n_bad_total_ = 0;
  std::vector<std::string> feature_order_;
  std::map<std::string, FeatureWoe> features_;
};

// Quantile bins with cut points at the i/k linear-interpolation quantiles.
// k collapses to the number of distinct achievable cuts; identical values
// give the single bin (-inf, +inf).
std::vector<BinDefinition> quantile_bin(std::vector<double> values, int k,
                                        const std::string& feature = {});

// Supervised monotonic binning: quantile-seeded, then adjacent merges until
// event rates are strictly monotone (direction from the sign of the rank
// correlation between value and label), every bin holds at least
// min_bin_count of each class, and the epsilon-smoothed WOE sequence is
// monotone.
std::vector<BinDefinition> monotonic_bin(const std::vector<double>& values,
                                         const std::vector<int>& labels, int k_init,
                                         int min_bin_count, const std::string& feature = {},
                                         double epsilon = kDefaultEpsilon);

// Groups sparse categorical codes: any code short of min_bin_count goods or
// bads pools into OTHER; groups come back ordered by descending total count.
std::vector<BinDefinition> group_rare(const std::vector<std::string>& categories,
                                      const std::vector<int>& labels, int min_bin_count,
                                      const std::string& feature = {});

// Bin counts, class distributions, clamped WOE and IV per feature.
// `bins` preserves caller order; a missing bin is appended per feature when
// absent. Labels: 1 = default (bad), 0 = non-default (good).
WoeTable compute_woe_table(const std::vector<std::pair<std::string, std::vector<BinDefinition>>>& bins,
                           const std::vector<FeatureVector>& data, const std::vector<int>& labels,
                           double epsilon, const SplitId& split);

// Replaces each feature value by its bin's WOE, in the table's fixed
// feature order.
std::vector<double> transform_woe(const FeatureVector& vector, const WoeTable& table);

}  // namespace cashflow
