#include "binning.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "errors.hpp"

namespace cashflow {

using nlohmann::json;

bool BinDefinition::contains_category(const std::string& code) const {
  return kind == BinKind::category_group &&
         std::binary_search(members.begin(), members.end(), code);
}

std::string BinDefinition::label() const {
  if (kind == BinKind::missing) return "<missing>";
  if (kind == BinKind::category_group) {
    if (catch_all) return "OTHER";
    std::string out = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) out += ",";
      out += members[i];
    }
    return out + "}";
  }
  auto bound = [](double b) {
    if (std::isinf(b)) return std::string(b < 0 ? "-inf" : "+inf");
    return std::to_string(b);
  };
  return "[" + bound(lower) + "," + bound(upper) + ")";
}

std::string_view iv_class_name(IvClass c) {
  switch (c) {
    case IvClass::not_predictive: return "not_predictive";
    case IvClass::weak: return "weak";
    case IvClass::medium: return "medium";
    case IvClass::strong: return "strong";
    case IvClass::suspicious: return "suspicious";
  }
  return "";
}

IvClass classify_iv(double iv) {
  if (iv < 0.02) return IvClass::not_predictive;
  if (iv < 0.1) return IvClass::weak;
  if (iv < 0.3) return IvClass::medium;
  if (iv < 0.5) return IvClass::strong;
  return IvClass::suspicious;
}

std::string SplitId::str() const {
  switch (role) {
    case Role::train: return "train:" + label;
    case Role::validation: return "validation:" + label;
    case Role::full: return "full:" + label;
    case Role::test: return "test:" + label;
  }
  return label;
}

SplitId SplitId::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view role = text.substr(0, colon);
  SplitId id;
  id.label = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  if (role == "train") id.role = Role::train;
  else if (role == "validation") id.role = Role::validation;
  else if (role == "full") id.role = Role::full;
  else if (role == "test") id.role = Role::test;
  else raise(Errc::schema_invalid, "unknown split role in '" + std::string(text) + "'");
  return id;
}

// ---------------------------------------------------------------------------
// quantile binning

namespace {

// Linear-interpolation empirical quantile (the (n-1)p definition) over a
// sorted sample.
double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<BinDefinition> bins_from_cuts(const std::vector<double>& cuts,
                                          const std::string& feature) {
  std::vector<BinDefinition> bins;
  double lower = -std::numeric_limits<double>::infinity();
  for (double cut : cuts) {
    BinDefinition b;
    b.feature = feature;
    b.lower = lower;
    b.upper = cut;
    bins.push_back(std::move(b));
    lower = cut;
  }
  BinDefinition last;
  last.feature = feature;
  last.lower = lower;
  bins.push_back(std::move(last));
  return bins;
}

}  // namespace

std::vector<BinDefinition> quantile_bin(std::vector<double> values, int k,
                                        const std::string& feature) {
  if (values.empty()) raise(Errc::empty_input, "quantile_bin on empty values");
  if (k < 2) raise(Errc::invalid_param, "quantile_bin requires k >= 2");
  std::sort(values.begin(), values.end());

  std::size_t distinct = 1;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] != values[i - 1]) ++distinct;
  const int effective_k = std::min<int>(k, static_cast<int>(distinct));

  std::vector<double> cuts;
  for (int i = 1; i < effective_k; ++i) {
    const double q = interpolated_quantile(values, static_cast<double>(i) / effective_k);
    if (cuts.empty() || q > cuts.back()) cuts.push_back(q);
  }
  return bins_from_cuts(cuts, feature);
}

// ---------------------------------------------------------------------------
// supervised monotonic binning

namespace {

struct CountedBin {
  double lower;
  double upper;
  long n_good = 0;
  long n_bad = 0;

  long total() const { return n_good + n_bad; }
  double event_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(n_bad) / static_cast<double>(total());
  }
};

// Sign of the rank correlation between value and a binary label: positive
// when events concentrate at high values. Equivalent to sign(AUC - 1/2)
// computed by rank sums.
int rank_correlation_sign(const std::vector<double>& values, const std::vector<int>& labels) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double wins = 0.0, ties = 0.0;
  long neg_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    long group_pos = 0, group_neg = 0;
    while (j < order.size() && values[order[j]] == values[order[i]]) {
      (labels[order[j]] == 1 ? group_pos : group_neg)++;
      ++j;
    }
    wins += static_cast<double>(group_pos) * static_cast<double>(neg_below);
    ties += static_cast<double>(group_pos) * static_cast<double>(group_neg);
    neg_below += group_neg;
    i = j;
  }
  long n_pos = 0;
  for (int y : labels) n_pos += y;
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  const double auc = (wins + 0.5 * ties) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  if (auc > 0.5) return 1;
  if (auc < 0.5) return -1;
  return 1;  // tie-break: treat as increasing
}

double smoothed_woe(const CountedBin& b, long n_good_total, long n_bad_total, double epsilon) {
  const double dist_good = static_cast<double>(b.n_good) / static_cast<double>(n_good_total);
  const double dist_bad = static_cast<double>(b.n_bad) / static_cast<double>(n_bad_total);
  return std::log((dist_good + epsilon) / (dist_bad + epsilon));
}

void merge_into(std::vector<CountedBin>& bins, std::size_t i) {
  bins[i].upper = bins[i + 1].upper;
  bins[i].n_good += bins[i + 1].n_good;
  bins[i].n_bad += bins[i + 1].n_bad;
  bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(i) + 1);
}

}  // namespace

std::vector<BinDefinition> monotonic_bin(const std::vector<double>& values,
                                         const std::vector<int>& labels, int k_init,
                                         int min_bin_count, const std::string& feature,
                                         double epsilon) {
  if (values.size() != labels.size())
    raise(Errc::invalid_param, "values and labels must have equal length");
  long n_pos = 0;
  for (int y : labels) n_pos += y;
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) raise(Errc::single_class, "monotonic_bin needs both classes");

  const auto seed_bins = quantile_bin(values, k_init, feature);
  std::vector<CountedBin> bins;
  bins.reserve(seed_bins.size());
  for (const auto& b : seed_bins) bins.push_back({b.lower, b.upper, 0, 0});
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (auto& b : bins) {
      if (values[i] >= b.lower && values[i] < b.upper) {
        (labels[i] == 1 ? b.n_bad : b.n_good)++;
        break;
      }
    }
  }

  const int direction = rank_correlation_sign(values, labels);

  while (bins.size() > 1) {
    // Undersized bins merge into their smaller neighbour first.
    std::size_t thin = bins.size();
    for (std::size_t i = 0; i < bins.size(); ++i)
      if (bins[i].n_good < min_bin_count || bins[i].n_bad < min_bin_count) {
        thin = i;
        break;
      }
    if (thin < bins.size()) {
      std::size_t at;
      if (thin == 0) at = 0;
      else if (thin + 1 == bins.size()) at = thin - 1;
      else at = bins[thin - 1].total() <= bins[thin + 1].total() ? thin - 1 : thin;
      merge_into(bins, at);
      continue;
    }

    // Then the adjacent pair that most violates strict rate monotonicity.
    double worst = 0.0;
    std::size_t worst_at = bins.size();
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
      const double step = direction > 0 ? bins[i].event_rate() - bins[i + 1].event_rate()
                                        : bins[i + 1].event_rate() - bins[i].event_rate();
      if (step >= 0.0 && (worst_at == bins.size() || step > worst)) {
        worst = step;
        worst_at = i;
      }
    }
    if (worst_at < bins.size()) {
      merge_into(bins, worst_at);
      continue;
    }

    // Rates are strictly monotone; verify the smoothed WOE sequence agrees
    // (rate up means WOE down) and merge any residual inversion.
    std::size_t woe_violation = bins.size();
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
      const double w0 = smoothed_woe(bins[i], n_neg, n_pos, epsilon);
      const double w1 = smoothed_woe(bins[i + 1], n_neg, n_pos, epsilon);
      const bool bad = direction > 0 ? w1 > w0 : w1 < w0;
      if (bad) {
        woe_violation = i;
        break;
      }
    }
    if (woe_violation < bins.size()) {
      merge_into(bins, woe_violation);
      continue;
    }
    break;
  }

  std::vector<BinDefinition> out;
  out.reserve(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    BinDefinition b;
    b.feature = feature;
    b.lower = i == 0 ? -std::numeric_limits<double>::infinity() : bins[i].lower;
    b.upper = i + 1 == bins.size() ? std::numeric_limits<double>::infinity() : bins[i].upper;
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// rare-category grouping

std::vector<BinDefinition> group_rare(const std::vector<std::string>& categories,
                                      const std::vector<int>& labels, int min_bin_count,
                                      const std::string& feature) {
  if (categories.empty()) raise(Errc::empty_input, "group_rare on empty input");
  if (categories.size() != labels.size())
    raise(Errc::invalid_param, "categories and labels must have equal length");

  struct Counts {
    long n_good = 0;
    long n_bad = 0;
    long total() const { return n_good + n_bad; }
  };
  std::map<std::string, Counts> counts;
  for (std::size_t i = 0; i < categories.size(); ++i)
    (labels[i] == 1 ? counts[categories[i]].n_bad : counts[categories[i]].n_good)++;

  struct Group {
    std::vector<std::string> members;
    Counts counts;
    bool catch_all = false;
  };
  std::vector<Group> groups;
  Group other;
  other.catch_all = true;
  for (const auto& [code, c] : counts) {
    if (c.n_good >= min_bin_count && c.n_bad >= min_bin_count)
      groups.push_back({{code}, c, false});
    else {
      other.members.push_back(code);
      other.counts.n_good += c.n_good;
      other.counts.n_bad += c.n_bad;
    }
  }

  if (!other.members.empty()) {
    // The pooled group is kept when its total reaches the minimum; the
    // per-class rule governs pooling only.
    const bool other_ok = other.counts.total() >= min_bin_count;
    if (other_ok || groups.empty()) {
      groups.push_back(std::move(other));
    } else {
      // Pooled OTHER still short: fold it into the smallest qualifying group,
      // which inherits the catch-all role.
      std::size_t smallest = 0;
      for (std::size_t i = 1; i < groups.size(); ++i)
        if (groups[i].counts.total() < groups[smallest].counts.total()) smallest = i;
      auto& host = groups[smallest];
      host.members.insert(host.members.end(), other.members.begin(), other.members.end());
      host.counts.n_good += other.counts.n_good;
      host.counts.n_bad += other.counts.n_bad;
      host.catch_all = true;
    }
  }

  std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    if (a.counts.total() != b.counts.total()) return a.counts.total() > b.counts.total();
    return a.members.front() < b.members.front();
  });

  std::vector<BinDefinition> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    BinDefinition b;
    b.feature = feature;
    b.kind = BinKind::category_group;
    std::sort(g.members.begin(), g.members.end());
    b.members = std::move(g.members);
    b.catch_all = g.catch_all;
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// WOE table

namespace {

std::size_t bin_index_for(const std::vector<BinDefinition>& bins, const FeatureValue& value,
                          std::size_t missing_index, const std::string& feature) {
  if (is_categorical(value)) {
    const std::string& code = as_category(value);
    std::size_t catch_all = bins.size();
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (bins[i].contains_category(code)) return i;
      if (bins[i].catch_all) catch_all = i;
    }
    if (catch_all < bins.size()) return catch_all;
    raise(Errc::unbinned_value, "category '" + code + "' matches no bin of " + feature);
  }
  const double x = as_number(value);
  if (std::isnan(x)) return missing_index;
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (bins[i].contains_number(x)) return i;
  raise(Errc::unbinned_value, "value " + std::to_string(x) + " matches no bin of " + feature);
}

}  // namespace

WoeTable compute_woe_table(const std::vector<std::pair<std::string, std::vector<BinDefinition>>>& bins,
                           const std::vector<FeatureVector>& data, const std::vector<int>& labels,
                           double epsilon, const SplitId& split) {
  if (split.role != SplitId::Role::train)
    raise(Errc::leakage_guard,
          "WOE tables are fitted on training folds only; got '" + split.str() + "'");
  if (data.size() != labels.size())
    raise(Errc::invalid_param, "data and labels must have equal length");
  if (data.empty()) raise(Errc::empty_input, "compute_woe_table on empty data");
  if (epsilon <= 0.0) raise(Errc::invalid_param, "epsilon must be positive");

  long n_bad = 0;
  for (int y : labels) n_bad += y;
  const long n_good = static_cast<long>(labels.size()) - n_bad;
  if (n_good == 0 || n_bad == 0) raise(Errc::single_class, "compute_woe_table needs both classes");

  WoeTable table;
  table.epsilon_ = epsilon;
  table.clamp_ = kWoeClamp;
  table.trained_on_ = split.str();
  table.n_good_total_ = n_good;
  table.n_bad_total_ = n_bad;

  for (const auto& [feature, feature_bins] : bins) {
    FeatureWoe fw;
    fw.feature = feature;
    std::size_t missing_index = feature_bins.size();
    for (std::size_t i = 0; i < feature_bins.size(); ++i) {
      fw.bins.push_back({feature_bins[i], 0, 0, 0.0, 0.0, 0.0});
      if (feature_bins[i].kind == BinKind::missing) missing_index = i;
    }
    if (missing_index == feature_bins.size()) {
      BinDefinition missing;
      missing.feature = feature;
      missing.kind = BinKind::missing;
      fw.bins.push_back({missing, 0, 0, 0.0, 0.0, 0.0});
    }

    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto it = data[i].values.find(feature);
      std::size_t at;
      if (it == data[i].values.end())
        at = missing_index == feature_bins.size() ? fw.bins.size() - 1 : missing_index;
      else
        at = bin_index_for(feature_bins, it->second,
                           missing_index == feature_bins.size() ? fw.bins.size() - 1 : missing_index,
                           feature);
      (labels[i] == 1 ? fw.bins[at].n_bad : fw.bins[at].n_good)++;
    }

    double iv = 0.0;
    for (auto& stats : fw.bins) {
      stats.dist_good = static_cast<double>(stats.n_good) / static_cast<double>(n_good);
      stats.dist_bad = static_cast<double>(stats.n_bad) / static_cast<double>(n_bad);
      const double raw = std::log((stats.dist_good + epsilon) / (stats.dist_bad + epsilon));
      stats.woe = std::clamp(raw, -kWoeClamp, kWoeClamp);
      iv += (stats.dist_good - stats.dist_bad) * stats.woe;
    }
    fw.iv = iv;
    fw.iv_class = classify_iv(iv);

    table.feature_order_.push_back(feature);
    table.features_.emplace(feature, std::move(fw));
  }
  return table;
}

const FeatureWoe& WoeTable::feature(std::string_view name) const {
  const auto it = features_.find(std::string(name));
  if (it == features_.end())
    raise(Errc::not_found, "WOE table has no feature '" + std::string(name) + "'");
  return it->second;
}

bool WoeTable::has_feature(std::string_view name) const {
  return features_.contains(std::string(name));
}

double WoeTable::woe_of(std::string_view name, const FeatureValue& value) const {
  const FeatureWoe& fw = feature(name);
  std::size_t missing_index = fw.bins.size();
  std::vector<BinDefinition> defs;
  defs.reserve(fw.bins.size());
  for (std::size_t i = 0; i < fw.bins.size(); ++i) {
    defs.push_back(fw.bins[i].bin);
    if (fw.bins[i].bin.kind == BinKind::missing) missing_index = i;
  }
  const std::size_t at = bin_index_for(defs, value, missing_index, fw.feature);
  return fw.bins[at].woe;
}

std::vector<double> transform_woe(const FeatureVector& vector, const WoeTable& table) {
  std::vector<double> out;
  out.reserve(table.feature_order().size());
  for (const auto& name : table.feature_order()) {
    const auto it = vector.values.find(name);
    if (it == vector.values.end()) {
      const FeatureWoe& fw = table.feature(name);
      double woe = 0.0;
      bool found = false;
      for (const auto& stats : fw.bins)
        if (stats.bin.kind == BinKind::missing) {
          woe = stats.woe;
          found = true;
          break;
        }
      if (!found) raise(Errc::unbinned_value, "no missing bin for '" + name + "'");
      out.push_back(woe);
    } else {
      out.push_back(table.woe_of(name, it->second));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json bound_to_json(double b) {
  if (std::isinf(b)) return nullptr;
  return b;
}

double bound_from_json(const json& j, bool lower) {
  if (j.is_null())
    return lower ? -std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::string_view kind_name(BinKind k) {
  switch (k) {
    case BinKind::interval: return "interval";
    case BinKind::category_group: return "category_group";
    case BinKind::missing: return "missing";
  }
  return "interval";
}

BinKind kind_from_name(std::string_view name) {
  if (name == "interval") return BinKind::interval;
  if (name == "category_group") return BinKind::category_group;
  if (name == "missing") return BinKind::missing;
  raise(Errc::schema_invalid, "unknown bin kind '" + std::string(name) + "'");
}

IvClass iv_class_from_name(std::string_view name) {
  for (IvClass c : {IvClass::not_predictive, IvClass::weak, IvClass::medium, IvClass::strong,
                    IvClass::suspicious})
    if (iv_class_name(c) == name) return c;
  raise(Errc::schema_invalid, "unknown iv class '" + std::string(name) + "'");
}

}  // namespace

std::string WoeTable::to_json() const {
  json j;
  j["epsilon"] = epsilon_;
  j["clamp"] = clamp_;
  j["trained_on"] = trained_on_;
  j["n_good"] = n_good_total_;
  j["n_bad"] = n_bad_total_;
  auto features = json::array();
  for (const auto& name : feature_order_) {
    const FeatureWoe& fw = features_.at(name);
    json jf;
    jf["feature"] = fw.feature;
    jf["iv"] = fw.iv;
    jf["iv_class"] = std::string(iv_class_name(fw.iv_class));
    auto bins = json::array();
    for (const auto& stats : fw.bins) {
      json jb;
      jb["kind"] = std::string(kind_name(stats.bin.kind));
      if (stats.bin.kind == BinKind::interval) {
        jb["lower"] = bound_to_json(stats.bin.lower);
        jb["upper"] = bound_to_json(stats.bin.upper);
      }
      if (stats.bin.kind == BinKind::category_group) {
        jb["members"] = stats.bin.members;
        jb["catch_all"] = stats.bin.catch_all;
      }
      jb["n_good"] = stats.n_good;
      jb["n_bad"] = stats.n_bad;
      jb["dist_good"] = stats.dist_good;
      jb["dist_bad"] = stats.dist_bad;
      jb["woe"] = stats.woe;
      bins.push_back(std::move(jb));
    }
    jf["bins"] = std::move(bins);
    features.push_back(std::move(jf));
  }
  j["features"] = std::move(features);
  return j.dump();
}

WoeTable WoeTable::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("WOE table JSON: ") + e.what());
  }
  WoeTable table;
  try {
    table.epsilon_ = j.at("epsilon").get<double>();
    table.clamp_ = j.at("clamp").get<double>();
    table.trained_on_ = j.at("trained_on").get<std::string>();
    const SplitId split = SplitId::parse(table.trained_on_);
    if (split.role != SplitId::Role::train)
      raise(Errc::leakage_guard, "stored WOE table names non-training split");
    table.n_good_total_ = j.at("n_good").get<long>();
    table.n_bad_total_ = j.at("n_bad").get<long>();
    for (const auto& jf : j.at("features")) {
      FeatureWoe fw;
      fw.feature = jf.at("feature").get<std::string>();
      fw.iv = jf.at("iv").get<double>();
      fw.iv_class = iv_class_from_name(jf.at("iv_class").get<std::string>());
      for (const auto& jb : jf.at("bins")) {
        BinStats stats;
        stats.bin.feature = fw.feature;
        stats.bin.kind = kind_from_name(jb.at("kind").get<std::string>());
        if (stats.bin.kind == BinKind::interval) {
          stats.bin.lower = bound_from_json(jb.at("lower"), true);
          stats.bin.upper = bound_from_json(jb.at("upper"), false);
        }
        if (stats.bin.kind == BinKind::category_group) {
          stats.bin.members = jb.at("members").get<std::vector<std::string>>();
          stats.bin.catch_all = jb.at("catch_all").get<bool>();
        }
        stats.n_good = jb.at("n_good").get<long>();
        stats.n_bad = jb.at("n_bad").get<long>();
        stats.dist_good = jb.at("dist_good").get<double>();
        stats.dist_bad = jb.at("dist_bad").get<double>();
        stats.woe = jb.at("woe").get<double>();
        fw.bins.push_back(std::move(stats));
      }
      table.feature_order_.push_back(fw.feature);
      table.features_.emplace(fw.feature, std::move(fw));
    }
  } catch (const json::exception& e) {
    raise(Errc::schema_invalid, std::string("WOE table JSON: ") + e.what());
  }
  return table;
}

}  // namespace cashflow
