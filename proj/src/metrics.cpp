#include "metrics.hpp"

#include <algorithm>
#include <cstddef>

#include "errors.hpp"

namespace cashflow {

namespace {

void check_inputs(const std::vector<int>& labels, const std::vector<double>& scores,
                  long* n_pos_out, long* n_neg_out) {
  if (labels.size() != scores.size())
    raise(Errc::invalid_param, "labels and scores must have equal length");
  if (labels.empty()) raise(Errc::empty_input, "auroc on empty input");
  long n_pos = 0;
  for (int y : labels) n_pos += y;
  const long n_neg = static_cast<long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) raise(Errc::single_class, "auroc needs both classes");
  *n_pos_out = n_pos;
  *n_neg_out = n_neg;
}

std::vector<std::size_t> order_by_score_desc(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double auroc(const std::vector<int>& labels, const std::vector<double>& scores) {
  long n_pos = 0, n_neg = 0;
  check_inputs(labels, scores, &n_pos, &n_neg);

  // Ascending sweep: positives beat every negative strictly below them;
  // tied groups contribute half credit. All counts stay integral.
  auto order = order_by_score_desc(scores);
  std::reverse(order.begin(), order.end());

  double wins = 0.0, ties = 0.0;
  long neg_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    long group_pos = 0, group_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? group_pos : group_neg)++;
      ++j;
    }
    wins += static_cast<double>(group_pos) * static_cast<double>(neg_below);
    ties += static_cast<double>(group_pos) * static_cast<double>(group_neg);
    neg_below += group_neg;
    i = j;
  }
  return (wins + 0.5 * ties) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores) {
  long n_pos = 0, n_neg = 0;
  check_inputs(labels, scores, &n_pos, &n_neg);

  const auto order = order_by_score_desc(scores);
  RocCurve curve;
  curve.thresholds.push_back(scores[order.front()] + 1.0);
  curve.tpr.push_back(0.0);
  curve.fpr.push_back(0.0);

  long tp = 0, fp = 0;
  double area = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    long group_pos = 0, group_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? group_pos : group_neg)++;
      ++j;
    }
    const double tpr_before = static_cast<double>(tp) / static_cast<double>(n_pos);
    tp += group_pos;
    fp += group_neg;
    const double tpr_after = static_cast<double>(tp) / static_cast<double>(n_pos);
    const double step_fpr = static_cast<double>(group_neg) / static_cast<double>(n_neg);
    area += 0.5 * step_fpr * (tpr_before + tpr_after);

    curve.thresholds.push_back(scores[order[i]]);
    curve.tpr.push_back(tpr_after);
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
    i = j;
  }
  curve.auroc = area;
  return curve;
}

}  // namespace cashflow
