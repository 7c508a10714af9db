#include "splits.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace cashflow {

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const std::vector<int>& labels) {
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) raise(Errc::invalid_param, "labels must be 0/1");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return by_class;
}

}  // namespace

TrainValidSplit stratified_split(const std::vector<int>& labels, double train_fraction,
                                 std::uint64_t seed) {
  if (labels.empty()) raise(Errc::empty_input, "stratified_split on empty labels");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    raise(Errc::invalid_param, "train_fraction must be in (0,1)");

  Rng rng(seed);
  auto by_class = indices_by_class(labels);
  TrainValidSplit split;
  for (auto& members : by_class) {
    rng.shuffle(members);
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(members.size()) + 0.5));
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < n_train ? split.train : split.valid).push_back(members[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  return split;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int fold_count,
                                  std::uint64_t seed) {
  if (labels.empty()) raise(Errc::empty_input, "stratified_folds on empty labels");
  if (fold_count < 2) raise(Errc::invalid_param, "fold_count must be >= 2");

  Rng rng(seed);
  auto by_class = indices_by_class(labels);
  std::vector<int> fold_of(labels.size(), 0);
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      fold_of[members[i]] = static_cast<int>(i % static_cast<std::size_t>(fold_count));
  }
  return fold_of;
}

}  // namespace cashflow
