#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "metrics.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace cashflow;

TEST_CASE("auroc: the hand-worked 4-point example is exactly 0.75") {
  CHECK(auroc({0, 0, 1, 1}, {0.1, 0.4, 0.35, 0.8}) == 0.75);
}

TEST_CASE("auroc: all scores equal gives 0.5") {
  CHECK(auroc({0, 1, 0, 1, 1}, {0.3, 0.3, 0.3, 0.3, 0.3}) == doctest::Approx(0.5));
}

TEST_CASE("auroc: scores equal to labels give 1.0") {
  CHECK(auroc({0, 1, 0, 1}, {0.0, 1.0, 0.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("auroc requires both classes") {
  CHECK_THROWS_AS(auroc({1, 1}, {0.1, 0.2}), Error);
  try {
    auroc({0, 0}, {0.1, 0.2});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_class);
  }
}

TEST_CASE("pair statistic equals brute-force enumeration") {
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 5 + static_cast<int>(rng.uniform_int(0, 60));
    std::vector<int> labels;
    std::vector<double> scores;
    long pos = 0;
    for (int i = 0; i < n; ++i) {
      const int y = rng.bernoulli(0.4) ? 1 : 0;
      pos += y;
      labels.push_back(y);
      // Quantized scores force heavy ties.
      scores.push_back(std::floor(rng.uniform(0.0, 1.0) * 8) / 8.0);
    }
    if (pos == 0 || pos == n) continue;
    CHECK(auroc(labels, scores) ==
          doctest::Approx(oracle::auroc_bruteforce(labels, scores)).epsilon(1e-12));
  }
}

TEST_CASE("dual path: pair statistic equals trapezoid over the ROC curve") {
  Rng rng(5);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 96));
    std::vector<int> labels;
    std::vector<double> scores;
    long pos = 0;
    const bool heavy_ties = rep % 3 == 0;
    for (int i = 0; i < n; ++i) {
      const int y = rng.bernoulli(0.35) ? 1 : 0;
      pos += y;
      labels.push_back(y);
      const double s = rng.uniform(0.0, 1.0);
      scores.push_back(heavy_ties ? std::floor(s * 4) / 4.0 : s);
    }
    if (pos == 0 || pos == n) continue;
    const double pair_stat = auroc(labels, scores);
    const auto curve = roc_curve(labels, scores);
    CHECK(std::abs(pair_stat - curve.auroc) < 1e-12);
  }
}

TEST_CASE("roc curve: endpoints pinned, both rates non-decreasing, thresholds descend") {
  Rng rng(7);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 200; ++i) {
    labels.push_back(rng.bernoulli(0.3) ? 1 : 0);
    scores.push_back(std::floor(rng.uniform(0.0, 1.0) * 10) / 10.0);
  }
  const auto curve = roc_curve(labels, scores);
  CHECK(curve.fpr.front() == 0.0);
  CHECK(curve.tpr.front() == 0.0);
  CHECK(curve.fpr.back() == doctest::Approx(1.0));
  CHECK(curve.tpr.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
    CHECK(curve.fpr[i] >= curve.fpr[i - 1]);
    CHECK(curve.tpr[i] >= curve.tpr[i - 1]);
    CHECK(curve.thresholds[i] < curve.thresholds[i - 1]);
  }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
  Rng rng(11);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 300; ++i) {
    labels.push_back(rng.bernoulli(0.4) ? 1 : 0);
    scores.push_back(rng.normal());
  }
  const double base = auroc(labels, scores);
  auto transformed = scores;
  for (auto& s : transformed) s = std::exp(2.0 * s) + 5.0;
  CHECK(auroc(labels, transformed) == doctest::Approx(base).epsilon(1e-15));
  for (auto& s : transformed) s = std::atan(s);
  CHECK(auroc(labels, transformed) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("random scores at n=10^4 land near one half") {
  Rng rng(13);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 10000; ++i) {
    labels.push_back(rng.bernoulli(0.2) ? 1 : 0);
    scores.push_back(rng.uniform(0.0, 1.0));
  }
  CHECK(std::abs(auroc(labels, scores) - 0.5) < 0.02);
}
