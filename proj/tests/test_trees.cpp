#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "trees.hpp"

using namespace cashflow;

namespace {

void threshold_data(std::vector<std::vector<double>>* x, std::vector<int>* y, int n,
                    std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double v = rng.uniform(0.0, 1.0);
    x->push_back({v, rng.normal()});
    y->push_back(v > 0.5 ? 1 : 0);
  }
}

std::vector<double> scores_of(const BenchmarkModel& model,
                              const std::vector<std::vector<double>>& x) {
  std::vector<double> s;
  s.reserve(x.size());
  for (const auto& row : x) s.push_back(model.score(row));
  return s;
}

}  // namespace

TEST_CASE("single stump RF separates 1-D threshold data perfectly") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) {
    x.push_back({static_cast<double>(i)});
    y.push_back(i >= 50 ? 1 : 0);
  }
  const auto rf = fit_benchmark(ModelKind::RF, x, y, {{"n_trees", 1}, {"max_depth", 1}}, 7);
  CHECK(auroc(y, scores_of(*rf, x)) == doctest::Approx(1.0));
}

TEST_CASE("GB with zero rounds scores the constant base rate, AUROC 0.5") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  threshold_data(&x, &y, 200, 3);
  const auto gb = fit_benchmark(ModelKind::GB, x, y, {{"n_rounds", 0}}, 3);
  const auto s = scores_of(*gb, x);
  for (double v : s) CHECK(v == doctest::Approx(s.front()));
  CHECK(auroc(y, s) == doctest::Approx(0.5));
}

TEST_CASE("AB on symmetric contradictory data stays at chance") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back({static_cast<double>(i % 5)});
    y.push_back(0);
    x.push_back({static_cast<double>(i % 5)});
    y.push_back(1);
  }
  const auto ab = fit_benchmark(ModelKind::AB, x, y, {{"n_stumps", 25}}, 5);
  CHECK(auroc(y, scores_of(*ab, x)) == doctest::Approx(0.5));
}

TEST_CASE("all three ensembles learn a noisy threshold") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    const double v = rng.uniform(0.0, 1.0);
    x.push_back({v, rng.normal(), rng.normal()});
    y.push_back(rng.bernoulli(v > 0.5 ? 0.9 : 0.1) ? 1 : 0);
  }
  for (ModelKind kind : {ModelKind::RF, ModelKind::GB, ModelKind::AB}) {
    const auto model = fit_benchmark(kind, x, y, default_params(kind), 13);
    CHECK(auroc(y, scores_of(*model, x)) > 0.85);
  }
}

TEST_CASE("fits are deterministic per seed and vary across seeds for RF") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  threshold_data(&x, &y, 300, 17);

  const auto a = fit_benchmark(ModelKind::RF, x, y, {{"n_trees", 20}, {"max_depth", 4}}, 99);
  const auto b = fit_benchmark(ModelKind::RF, x, y, {{"n_trees", 20}, {"max_depth", 4}}, 99);
  const auto c = fit_benchmark(ModelKind::RF, x, y, {{"n_trees", 20}, {"max_depth", 4}}, 100);

  bool identical_ab = true, identical_ac = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (a->score(x[i]) != b->score(x[i])) identical_ab = false;
    if (a->score(x[i]) != c->score(x[i])) identical_ac = false;
  }
  CHECK(identical_ab);
  CHECK_FALSE(identical_ac);
}

TEST_CASE("GB and AB are seed-independent and reproducible") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  threshold_data(&x, &y, 200, 19);
  for (ModelKind kind : {ModelKind::GB, ModelKind::AB}) {
    const auto a = fit_benchmark(kind, x, y, default_params(kind), 1);
    const auto b = fit_benchmark(kind, x, y, default_params(kind), 2);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(a->score(x[i]) == b->score(x[i]));
  }
}

TEST_CASE("scores stay inside [0,1]") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  threshold_data(&x, &y, 300, 23);
  for (ModelKind kind : {ModelKind::RF, ModelKind::GB, ModelKind::AB}) {
    const auto model = fit_benchmark(kind, x, y, default_params(kind), 29);
    for (const auto& row : x) {
      const double s = model->score(row);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("unknown or out-of-range parameters raise INVALID_PARAM") {
  std::vector<std::vector<double>> x = {{0.0}, {1.0}};
  std::vector<int> y = {0, 1};
  try {
    fit_benchmark(ModelKind::RF, x, y, {{"bogus", 1.0}}, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_param);
  }
  CHECK_THROWS_AS(fit_benchmark(ModelKind::GB, x, y, {{"learning_rate", -0.5}}, 1), Error);
  CHECK_THROWS_AS(fit_benchmark(ModelKind::AB, x, y, {{"n_stumps", 0}}, 1), Error);
  CHECK_THROWS_AS(fit_benchmark(ModelKind::LR, x, y, {}, 1), Error);
}

TEST_CASE("single-class data raises SINGLE_CLASS") {
  std::vector<std::vector<double>> x = {{0.0}, {1.0}};
  try {
    fit_benchmark(ModelKind::RF, x, {1, 1}, {}, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::single_class);
  }
}
