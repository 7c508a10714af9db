#pragma once

#include <cstdint>
#include <vector>

namespace cashflow {

struct SplitPlan {
  std::uint64_t seed = 42;
  double train_fraction = 0.60;
  bool stratified = true;
  int fold_count = 5;
  int repeats = 1;  // repeated CV: fold assignments re-drawn per repeat
};

struct TrainValidSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
};

// Per-class shuffle then nearest-count allocation, so event counts per side
// stay within one applicant of proportional. Indices come back ascending.
TrainValidSplit stratified_split(const std::vector<int>& labels, double train_fraction,
                                 std::uint64_t seed);

// Stratified k folds by per-class round-robin: event counts per fold differ
// by at most one. Returns fold index per row.
std::vector<int> stratified_folds(const std::vector<int>& labels, int fold_count,
                                  std::uint64_t seed);

}  // namespace cashflow
