#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace cashflow;

namespace {

struct Dataset {
  std::vector<FeatureVector> vectors;
  std::vector<int> labels;
};

Dataset synth_features(int n, std::uint64_t seed) {
  GeneratorConfig config = GeneratorConfig::with_default_signal();
  config.n_applicants = n;
  config.seed = seed;
  const auto portfolio = generate_portfolio(config);
  Dataset out;
  for (std::size_t i = 0; i < portfolio.records.size(); ++i) {
    out.vectors.push_back(compute_features(portfolio.records[i], "t0"));
    out.labels.push_back(portfolio.truths[i].label);
  }
  return out;
}

}  // namespace

TEST_CASE("feature sets filter by source tag: 7, 10, 17") {
  CHECK(features_for(FeatureSet::application_only).size() == 7);
  CHECK(features_for(FeatureSet::bank_only).size() == 10);
  CHECK(features_for(FeatureSet::combined).size() == 17);
  for (const auto& name : features_for(FeatureSet::application_only))
    CHECK(feature_spec(name).source == FeatureSource::application);
  for (const auto& name : features_for(FeatureSet::bank_only))
    CHECK(feature_spec(name).source == FeatureSource::bank_statement);
}

TEST_CASE("fit_woe_table covers all requested features and honors the split guard") {
  const auto data = synth_features(200, 3);
  const auto features = features_for(FeatureSet::combined);
  const auto table =
      fit_woe_table(data.vectors, data.labels, features, {}, SplitId::train("unit"));
  CHECK(table.feature_order() == features);

  SplitId bad;
  bad.role = SplitId::Role::validation;
  bad.label = "oops";
  CHECK_THROWS_AS(fit_woe_table(data.vectors, data.labels, features, {}, bad), Error);
}

TEST_CASE("cross_validate returns one AUROC per fold plus their mean") {
  const auto data = synth_features(300, 5);
  const auto cv = cross_validate(ModelKind::LR, data.vectors, data.labels,
                                 features_for(FeatureSet::combined), default_params(ModelKind::LR),
                                 {}, 5, 42);
  REQUIRE(cv.fold_auroc.size() == 5);
  double mean = 0.0;
  for (double a : cv.fold_auroc) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    mean += a;
  }
  CHECK(cv.mean == doctest::Approx(mean / 5.0).epsilon(1e-12));
}

TEST_CASE("no-leakage: permuting validation-fold labels leaves training artifacts bit-identical") {
  const auto data = synth_features(250, 7);
  const int folds = 5;
  const std::uint64_t seed = 11;
  const auto fold_of = stratified_folds(data.labels, folds, seed);
  const int target_fold = 2;

  auto fit_on_training_side = [&](const std::vector<int>& labels) {
    std::vector<FeatureVector> train_x;
    std::vector<int> train_y;
    for (std::size_t i = 0; i < data.vectors.size(); ++i)
      if (fold_of[i] != target_fold) {
        train_x.push_back(data.vectors[i]);
        train_y.push_back(labels[i]);
      }
    const auto table = fit_woe_table(train_x, train_y, features_for(FeatureSet::combined), {},
                                     SplitId::train("leak"));
    const auto model = train_scorecard(train_x, train_y, table, {}, {}, "v1", "t0");
    return std::pair{table.to_json(), model.to_json()};
  };

  auto permuted = data.labels;
  Rng rng(99);
  std::vector<std::size_t> valid_indices;
  for (std::size_t i = 0; i < permuted.size(); ++i)
    if (fold_of[i] == target_fold) valid_indices.push_back(i);
  std::vector<int> shuffled;
  for (std::size_t i : valid_indices) shuffled.push_back(permuted[i]);
  rng.shuffle(shuffled);
  for (std::size_t k = 0; k < valid_indices.size(); ++k) permuted[valid_indices[k]] = shuffled[k];

  const auto baseline = fit_on_training_side(data.labels);
  const auto with_permuted_validation = fit_on_training_side(permuted);
  CHECK(baseline.first == with_permuted_validation.first);
  CHECK(baseline.second == with_permuted_validation.second);
}

TEST_CASE("random_search: a single-point space returns that point") {
  const auto data = synth_features(150, 9);
  const SearchSpace space = {{"lambda", 0.5, 0.5, false, false}};
  const auto result = random_search(ModelKind::LR, data.vectors, data.labels,
                                    features_for(FeatureSet::combined), space, 3, 3, 1, {});
  CHECK(result.best.at("lambda") == doctest::Approx(0.5));
  CHECK(result.trials.size() == 3);
}

TEST_CASE("random_search is deterministic per seed") {
  const auto data = synth_features(150, 13);
  const auto space = default_search_space(ModelKind::LR);
  const auto a = random_search(ModelKind::LR, data.vectors, data.labels,
                               features_for(FeatureSet::combined), space, 6, 3, 5, {});
  const auto b = random_search(ModelKind::LR, data.vectors, data.labels,
                               features_for(FeatureSet::combined), space, 6, 3, 5, {});
  CHECK(a.best == b.best);
  CHECK(a.best_cv_auroc == b.best_cv_auroc);
}

TEST_CASE("random_search: integer dimensions come back integral and in range") {
  const auto data = synth_features(150, 17);
  const auto space = default_search_space(ModelKind::RF);
  const auto result =
      random_search(ModelKind::RF, data.vectors, data.labels,
                    features_for(FeatureSet::bank_only), space, 4, 2, 3,
                    {});
  for (const auto& trial : result.trials) {
    const double trees = trial.params.at("n_trees");
    const double depth = trial.params.at("max_depth");
    CHECK(trees == std::floor(trees));
    CHECK(trees >= 50);
    CHECK(trees <= 500);
    CHECK(depth >= 2);
    CHECK(depth <= 8);
  }
}

TEST_CASE("widening a search space does not hurt the expected best CV score") {
  const auto data = synth_features(200, 19);
  const SearchSpace narrow = {{"lambda", 5.0, 50.0, false, true}};
  const SearchSpace wide = {{"lambda", 0.05, 50.0, false, true}};  // superset, includes good region
  double narrow_sum = 0.0, wide_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    narrow_sum += random_search(ModelKind::LR, data.vectors, data.labels,
                                features_for(FeatureSet::combined), narrow, 8, 3, seed, {})
                      .best_cv_auroc;
    wide_sum += random_search(ModelKind::LR, data.vectors, data.labels,
                              features_for(FeatureSet::combined), wide, 8, 3, seed, {})
                    .best_cv_auroc;
  }
  CHECK(wide_sum / 10.0 >= narrow_sum / 10.0 - 0.01);
}

TEST_CASE("run_ablation produces one result per kind x set with consistent means") {
  const auto data = synth_features(300, 23);
  SplitPlan plan;
  plan.seed = 4;
  plan.fold_count = 5;
  const auto results = run_ablation(
      data.vectors, data.labels, plan, {ModelKind::LR},
      {FeatureSet::application_only, FeatureSet::bank_only, FeatureSet::combined}, {});
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    CHECK(r.auroc_per_fold.size() == 5);
    double mean = 0.0;
    for (double a : r.auroc_per_fold) mean += a;
    CHECK(r.auroc_mean == doctest::Approx(mean / 5.0).epsilon(1e-12));
    CHECK(r.seed == 4);
  }
}

TEST_CASE("run_ablation with repeated CV stacks folds across repeats") {
  const auto data = synth_features(200, 41);
  SplitPlan plan;
  plan.seed = 2;
  plan.fold_count = 3;
  plan.repeats = 2;
  const auto results =
      run_ablation(data.vectors, data.labels, plan, {ModelKind::LR}, {FeatureSet::combined}, {});
  REQUIRE(results.size() == 1);
  CHECK(results[0].auroc_per_fold.size() == 6);
  double mean = 0.0;
  for (double a : results[0].auroc_per_fold) mean += a;
  CHECK(results[0].auroc_mean == doctest::Approx(mean / 6.0).epsilon(1e-12));
}

TEST_CASE("iv_report ranks features by descending IV") {
  const auto data = synth_features(300, 29);
  const auto table = fit_woe_table(data.vectors, data.labels,
                                   features_for(FeatureSet::combined), {},
                                   SplitId::train("unit"));
  const auto rows = iv_report(table);
  REQUIRE(rows.size() == 17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].rank == static_cast<int>(i) + 1);
    if (i > 0) CHECK(rows[i].iv <= rows[i - 1].iv);
  }
}

TEST_CASE("results and IV CSVs carry the exact column headers") {
  const auto data = synth_features(150, 31);
  SplitPlan plan;
  plan.fold_count = 3;
  const auto results =
      run_ablation(data.vectors, data.labels, plan, {ModelKind::LR}, {FeatureSet::combined}, {});
  const auto csv = results_csv(results);
  CHECK(csv.rfind("model,feature_set,fold,auroc,seed,params_hash\n", 0) == 0);
  CHECK(csv.find("LR,combined,0,") != std::string::npos);
  CHECK(csv.find(",mean,") != std::string::npos);

  const auto table = fit_woe_table(data.vectors, data.labels,
                                   features_for(FeatureSet::combined), {},
                                   SplitId::train("unit"));
  const auto iv = iv_csv(iv_report(table));
  CHECK(iv.rfind("feature,iv,iv_class,rank\n", 0) == 0);

  // Deterministic output given identical inputs.
  CHECK(results_csv(results) == csv);
  CHECK(params_hash(default_params(ModelKind::GB)) ==
        params_hash(default_params(ModelKind::GB)));
}

TEST_CASE("svg reports are deterministic and well-formed") {
  const auto data = synth_features(150, 37);
  const auto table = fit_woe_table(data.vectors, data.labels,
                                   features_for(FeatureSet::combined), {},
                                   SplitId::train("unit"));
  const auto rows = iv_report(table);
  const auto svg = svg_iv_bars(rows);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == svg_iv_bars(rows));
}
