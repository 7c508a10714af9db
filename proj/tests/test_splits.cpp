#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"
#include "splits.hpp"

using namespace cashflow;

namespace {

std::vector<int> labels_with_events(int n, int events, std::uint64_t seed) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < events; ++i) labels[static_cast<std::size_t>(i)] = 1;
  Rng rng(seed);
  rng.shuffle(labels);
  return labels;
}

}  // namespace

TEST_CASE("60:40 split of the 611-record shape lands on 56 train events") {
  const auto labels = labels_with_events(611, 93, 1);
  const auto split = stratified_split(labels, 0.60, 42);

  long train_events = 0, train_non = 0;
  for (std::size_t i : split.train) (labels[i] == 1 ? train_events : train_non)++;
  long valid_events = 0, valid_non = 0;
  for (std::size_t i : split.valid) (labels[i] == 1 ? valid_events : valid_non)++;

  CHECK(split.train.size() + split.valid.size() == 611);
  // Proportional: 55.8 events, 310.8 non-events on the train side.
  CHECK(std::abs(static_cast<double>(train_events) - 55.8) <= 1.0);
  CHECK(std::abs(static_cast<double>(train_non) - 310.8) <= 1.0);
  CHECK(train_events == 56);
  CHECK(valid_events == 37);
}

TEST_CASE("event counts stay within one of proportional across seeds and fractions") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto labels = labels_with_events(500, 80, seed + 100);
    for (const double frac : {0.5, 0.6, 0.7, 0.8}) {
      const auto split = stratified_split(labels, frac, seed);
      long train_events = 0;
      for (std::size_t i : split.train) train_events += labels[i];
      CHECK(std::abs(static_cast<double>(train_events) - frac * 80.0) <= 1.0);
    }
  }
}

TEST_CASE("split partitions indices exactly") {
  const auto labels = labels_with_events(200, 40, 7);
  const auto split = stratified_split(labels, 0.6, 7);
  std::vector<int> seen(200, 0);
  for (std::size_t i : split.train) seen[i]++;
  for (std::size_t i : split.valid) seen[i]++;
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("stratified folds: event counts differ by at most one") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto labels = labels_with_events(611, 93, seed);
    const auto fold_of = stratified_folds(labels, 5, seed);
    std::vector<long> events(5, 0), totals(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      totals[static_cast<std::size_t>(fold_of[i])]++;
      events[static_cast<std::size_t>(fold_of[i])] += labels[i];
    }
    const auto [emin, emax] = std::minmax_element(events.begin(), events.end());
    const auto [tmin, tmax] = std::minmax_element(totals.begin(), totals.end());
    CHECK(*emax - *emin <= 1);
    CHECK(*tmax - *tmin <= 2);  // per-class rounding stacks at most twice
  }
}

TEST_CASE("splits are deterministic per seed") {
  const auto labels = labels_with_events(300, 60, 3);
  const auto a = stratified_split(labels, 0.6, 11);
  const auto b = stratified_split(labels, 0.6, 11);
  CHECK(a.train == b.train);
  CHECK(a.valid == b.valid);
  const auto c = stratified_split(labels, 0.6, 12);
  CHECK(a.train != c.train);
}

TEST_CASE("degenerate inputs raise") {
  CHECK_THROWS_AS(stratified_split({}, 0.6, 1), Error);
  CHECK_THROWS_AS(stratified_split({0, 1}, 0.0, 1), Error);
  CHECK_THROWS_AS(stratified_split({0, 1}, 1.0, 1), Error);
  CHECK_THROWS_AS(stratified_folds({0, 1}, 1, 1), Error);
  CHECK_THROWS_AS(stratified_folds({0, 2}, 5, 1), Error);
}
