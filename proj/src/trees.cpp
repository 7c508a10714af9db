#include "trees.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"
#include "scorecard.hpp"

namespace cashflow {

std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::LR: return "LR";
    case ModelKind::RF: return "RF";
    case ModelKind::GB: return "GB";
    case ModelKind::AB: return "AB";
  }
  return "LR";
}

ModelKind model_kind_from_name(std::string_view name) {
  if (name == "LR") return ModelKind::LR;
  if (name == "RF") return ModelKind::RF;
  if (name == "GB") return ModelKind::GB;
  if (name == "AB") return ModelKind::AB;
  raise(Errc::invalid_param, "unknown model kind '" + std::string(name) + "'");
}

namespace {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;
  int left = -1;
  int right = -1;
};

class Tree {
 public:
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& row) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const auto& n = nodes[static_cast<std::size_t>(at)];
      at = row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].value;
  }
};

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best weighted-gini split over the candidate features; thresholds halfway
// between distinct consecutive values, deterministic tie-break on (gain,
// candidate order, threshold).
SplitChoice best_gini_split(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            const std::vector<double>& w, const std::vector<std::size_t>& rows,
                            const std::vector<int>& features, double min_leaf_weight) {
  SplitChoice best;
  double w_total = 0.0, w_pos = 0.0;
  for (std::size_t r : rows) {
    w_total += w[r];
    if (y[r] == 1) w_pos += w[r];
  }
  const double parent_gini = 2.0 * (w_pos / w_total) * (1.0 - w_pos / w_total);

  std::vector<std::size_t> order(rows);
  for (int f : features) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = x[a][static_cast<std::size_t>(f)];
      const double vb = x[b][static_cast<std::size_t>(f)];
      return va != vb ? va < vb : a < b;
    });
    double left_w = 0.0, left_pos = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t r = order[i];
      left_w += w[r];
      if (y[r] == 1) left_pos += w[r];
      const double v = x[r][static_cast<std::size_t>(f)];
      const double v_next = x[order[i + 1]][static_cast<std::size_t>(f)];
      if (v == v_next) continue;
      const double right_w = w_total - left_w;
      if (left_w < min_leaf_weight || right_w < min_leaf_weight) continue;
      const double right_pos = w_pos - left_pos;
      const double gini_l = 2.0 * (left_pos / left_w) * (1.0 - left_pos / left_w);
      const double gini_r = 2.0 * (right_pos / right_w) * (1.0 - right_pos / right_w);
      const double gain = parent_gini - (left_w * gini_l + right_w * gini_r) / w_total;
      if (gain > best.gain + 1e-15) {
        best.found = true;
        best.feature = f;
        best.threshold = v + 0.5 * (v_next - v);
        best.gain = gain;
      }
    }
  }
  return best;
}

int grow_classification(Tree& tree, const std::vector<std::vector<double>>& x,
                        const std::vector<int>& y, const std::vector<double>& w,
                        std::vector<std::size_t> rows, int depth, int max_depth, double min_leaf,
                        int mtry, Rng& rng) {
  double w_total = 0.0, w_pos = 0.0;
  for (std::size_t r : rows) {
    w_total += w[r];
    if (y[r] == 1) w_pos += w[r];
  }
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back({});
  tree.nodes[static_cast<std::size_t>(node_id)].value = w_total > 0.0 ? w_pos / w_total : 0.0;

  if (depth >= max_depth || rows.size() < 2 || w_pos == 0.0 || w_pos == w_total)
    return node_id;

  const int d = static_cast<int>(x.front().size());
  std::vector<int> features(static_cast<std::size_t>(d));
  for (int f = 0; f < d; ++f) features[static_cast<std::size_t>(f)] = f;
  if (mtry < d) {
    // Partial Fisher-Yates: first mtry entries form the seeded sample.
    for (int i = 0; i < mtry; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(i, d - 1));
      std::swap(features[static_cast<std::size_t>(i)], features[j]);
    }
    features.resize(static_cast<std::size_t>(mtry));
    std::sort(features.begin(), features.end());
  }

  const auto split = best_gini_split(x, y, w, rows, features, min_leaf);
  if (!split.found) return node_id;

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows)
    (x[r][static_cast<std::size_t>(split.feature)] < split.threshold ? left_rows : right_rows)
        .push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  const int left = grow_classification(tree, x, y, w, std::move(left_rows), depth + 1, max_depth,
                                       min_leaf, mtry, rng);
  const int right = grow_classification(tree, x, y, w, std::move(right_rows), depth + 1, max_depth,
                                        min_leaf, mtry, rng);
  auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
  node.feature = split.feature;
  node.threshold = split.threshold;
  node.left = left;
  node.right = right;
  return node_id;
}

// Regression tree on gradient residuals with Newton leaf values
// (sum residual / sum hessian), variance-reduction splits.
int grow_regression(Tree& tree, const std::vector<std::vector<double>>& x,
                    const std::vector<double>& residual, const std::vector<double>& hessian,
                    std::vector<std::size_t> rows, int depth, int max_depth, double min_leaf) {
  double sum_r = 0.0, sum_h = 0.0;
  for (std::size_t r : rows) {
    sum_r += residual[r];
    sum_h += hessian[r];
  }
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back({});
  tree.nodes[static_cast<std::size_t>(node_id)].value = sum_r / (sum_h + 1e-12);

  if (depth >= max_depth || rows.size() < 2) return node_id;

  const int d = static_cast<int>(x.front().size());
  SplitChoice best;
  std::vector<std::size_t> order(rows);
  for (int f = 0; f < d; ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = x[a][static_cast<std::size_t>(f)];
      const double vb = x[b][static_cast<std::size_t>(f)];
      return va != vb ? va < vb : a < b;
    });
    double left_r = 0.0;
    double left_n = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t r = order[i];
      left_r += residual[r];
      left_n += 1.0;
      const double v = x[r][static_cast<std::size_t>(f)];
      const double v_next = x[order[i + 1]][static_cast<std::size_t>(f)];
      if (v == v_next) continue;
      const double right_n = static_cast<double>(order.size()) - left_n;
      if (left_n < min_leaf || right_n < min_leaf) continue;
      const double right_r = sum_r - left_r;
      // Variance reduction up to constants: sum of (group sum)^2 / group n.
      const double gain = left_r * left_r / left_n + right_r * right_r / right_n -
                          sum_r * sum_r / static_cast<double>(order.size());
      if (gain > best.gain + 1e-15) {
        best.found = true;
        best.feature = f;
        best.threshold = v + 0.5 * (v_next - v);
        best.gain = gain;
      }
    }
  }
  if (!best.found) return node_id;

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows)
    (x[r][static_cast<std::size_t>(best.feature)] < best.threshold ? left_rows : right_rows)
        .push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  const int left =
      grow_regression(tree, x, residual, hessian, std::move(left_rows), depth + 1, max_depth, min_leaf);
  const int right = grow_regression(tree, x, residual, hessian, std::move(right_rows), depth + 1,
                                    max_depth, min_leaf);
  auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
  node.feature = best.feature;
  node.threshold = best.threshold;
  node.left = left;
  node.right = right;
  return node_id;
}

// ---------------------------------------------------------------------------

void check_both_classes(const std::vector<int>& y) {
  long pos = 0;
  for (int v : y) pos += v;
  if (pos == 0 || pos == static_cast<long>(y.size()))
    raise(Errc::single_class, "benchmark fit needs both classes");
}

double param_of(const Params& params, const Params& defaults, const std::string& name) {
  for (const auto& [key, _] : params)
    if (!defaults.contains(key))
      raise(Errc::invalid_param, "unknown parameter '" + key + "'");
  const auto it = params.find(name);
  return it != params.end() ? it->second : defaults.at(name);
}

class RandomForest : public BenchmarkModel {
 public:
  std::vector<Tree> trees;

  double score(const std::vector<double>& row) const override {
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict(row);
    return sum / static_cast<double>(trees.size());
  }
};

class GradientBoosting : public BenchmarkModel {
 public:
  double base = 0.0;
  double learning_rate = 0.1;
  std::vector<Tree> trees;

  double score(const std::vector<double>& row) const override {
    double f = base;
    for (const auto& t : trees) f += learning_rate * t.predict(row);
    return sigmoid(f);
  }
};

class AdaBoostStumps : public BenchmarkModel {
 public:
  struct Stump {
    int feature;
    double threshold;
    int left_vote;   // +-1
    int right_vote;  // +-1
    double alpha;
  };
  std::vector<Stump> stumps;

  double score(const std::vector<double>& row) const override {
    double margin = 0.0;
    for (const auto& s : stumps)
      margin += s.alpha * (row[static_cast<std::size_t>(s.feature)] < s.threshold ? s.left_vote
                                                                                  : s.right_vote);
    return sigmoid(margin);
  }
};

std::unique_ptr<BenchmarkModel> fit_rf(const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y, const Params& params,
                                       std::uint64_t seed) {
  const Params defaults = default_params(ModelKind::RF);
  const int n_trees = static_cast<int>(param_of(params, defaults, "n_trees"));
  const int max_depth = static_cast<int>(param_of(params, defaults, "max_depth"));
  const double min_leaf = param_of(params, defaults, "min_leaf");
  if (n_trees < 1 || max_depth < 1 || min_leaf < 1)
    raise(Errc::invalid_param, "RF parameters out of range");

  const auto n = x.size();
  const int d = static_cast<int>(x.front().size());
  const int mtry = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
  const std::vector<double> unit_weights(n, 1.0);

  Rng rng(seed);
  auto model = std::make_unique<RandomForest>();
  for (int t = 0; t < n_trees; ++t) {
    std::vector<std::size_t> rows(n);
    for (auto& r : rows)
      r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    std::sort(rows.begin(), rows.end());
    Tree tree;
    grow_classification(tree, x, y, unit_weights, std::move(rows), 0, max_depth, min_leaf, mtry,
                        rng);
    model->trees.push_back(std::move(tree));
  }
  return model;
}

std::unique_ptr<BenchmarkModel> fit_gb(const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y, const Params& params,
                                       std::uint64_t /*seed*/) {
  const Params defaults = default_params(ModelKind::GB);
  const int n_rounds = static_cast<int>(param_of(params, defaults, "n_rounds"));
  const int depth = static_cast<int>(param_of(params, defaults, "depth"));
  const double learning_rate = param_of(params, defaults, "learning_rate");
  const double min_leaf = param_of(params, defaults, "min_leaf");
  if (n_rounds < 0 || depth < 1 || learning_rate <= 0.0 || learning_rate > 1.0 || min_leaf < 1)
    raise(Errc::invalid_param, "GB parameters out of range");

  const auto n = x.size();
  long pos = 0;
  for (int v : y) pos += v;
  const double rate = static_cast<double>(pos) / static_cast<double>(n);

  auto model = std::make_unique<GradientBoosting>();
  model->base = logit(rate);
  model->learning_rate = learning_rate;

  std::vector<double> f(n, model->base);
  std::vector<double> residual(n), hessian(n);
  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;

  for (int round = 0; round < n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      residual[i] = static_cast<double>(y[i]) - p;
      hessian[i] = p * (1.0 - p);
    }
    Tree tree;
    grow_regression(tree, x, residual, hessian, all_rows, 0, depth, min_leaf);
    for (std::size_t i = 0; i < n; ++i) f[i] += learning_rate * tree.predict(x[i]);
    model->trees.push_back(std::move(tree));
  }
  return model;
}

std::unique_ptr<BenchmarkModel> fit_ab(const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y, const Params& params,
                                       std::uint64_t /*seed*/) {
  const Params defaults = default_params(ModelKind::AB);
  const int n_stumps = static_cast<int>(param_of(params, defaults, "n_stumps"));
  if (n_stumps < 1) raise(Errc::invalid_param, "AB parameters out of range");

  const auto n = x.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  const std::vector<std::size_t> all_rows = [&] {
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    return rows;
  }();
  const int d = static_cast<int>(x.front().size());
  std::vector<int> all_features(static_cast<std::size_t>(d));
  for (int f = 0; f < d; ++f) all_features[static_cast<std::size_t>(f)] = f;

  auto model = std::make_unique<AdaBoostStumps>();
  for (int t = 0; t < n_stumps; ++t) {
    const auto split = best_gini_split(x, y, w, all_rows, all_features, 0.0);
    AdaBoostStumps::Stump stump;
    if (!split.found) {
      // Degenerate weighting: vote the weighted majority everywhere.
      double pos_w = 0.0, total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        total += w[i];
        if (y[i] == 1) pos_w += w[i];
      }
      stump = {0, -std::numeric_limits<double>::infinity(), pos_w * 2.0 > total ? 1 : -1,
               pos_w * 2.0 > total ? 1 : -1, 0.0};
    } else {
      double lw = 0.0, lpos = 0.0, rw = 0.0, rpos = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool left = x[i][static_cast<std::size_t>(split.feature)] < split.threshold;
        (left ? lw : rw) += w[i];
        if (y[i] == 1) (left ? lpos : rpos) += w[i];
      }
      stump = {split.feature, split.threshold, lpos * 2.0 > lw ? 1 : -1, rpos * 2.0 > rw ? 1 : -1,
               0.0};
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int vote = x[i][static_cast<std::size_t>(stump.feature)] < stump.threshold
                           ? stump.left_vote
                           : stump.right_vote;
      if (vote != (y[i] == 1 ? 1 : -1)) err += w[i];
    }
    err = std::clamp(err, 1e-10, 1.0 - 1e-10);
    stump.alpha = 0.5 * std::log((1.0 - err) / err);
    model->stumps.push_back(stump);

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int vote = x[i][static_cast<std::size_t>(stump.feature)] < stump.threshold
                           ? stump.left_vote
                           : stump.right_vote;
      w[i] *= std::exp(-stump.alpha * vote * (y[i] == 1 ? 1.0 : -1.0));
      norm += w[i];
    }
    for (auto& wi : w) wi /= norm;
  }
  return model;
}

}  // namespace

Params default_params(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR: return {{"lambda", 1.0}};
    case ModelKind::RF: return {{"n_trees", 100}, {"max_depth", 8}, {"min_leaf", 1}};
    case ModelKind::GB:
      return {{"n_rounds", 100}, {"depth", 3}, {"learning_rate", 0.1}, {"min_leaf", 1}};
    case ModelKind::AB: return {{"n_stumps", 50}};
  }
  return {};
}

std::unique_ptr<BenchmarkModel> fit_benchmark(ModelKind kind,
                                              const std::vector<std::vector<double>>& x,
                                              const std::vector<int>& y, const Params& params,
                                              std::uint64_t seed) {
  if (x.empty() || x.size() != y.size())
    raise(Errc::invalid_param, "benchmark fit needs matching non-empty x/y");
  check_both_classes(y);
  switch (kind) {
    case ModelKind::RF: return fit_rf(x, y, params, seed);
    case ModelKind::GB: return fit_gb(x, y, params, seed);
    case ModelKind::AB: return fit_ab(x, y, params, seed);
    case ModelKind::LR: break;
  }
  raise(Errc::invalid_param, "fit_benchmark handles RF/GB/AB; LR trains via the scorecard");
}

}  // namespace cashflow
