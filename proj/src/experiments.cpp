#include "experiments.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace cashflow {

std::string_view feature_set_name(FeatureSet s) {
  switch (s) {
    case FeatureSet::application_only: return "application_only";
    case FeatureSet::bank_only: return "bank_only";
    case FeatureSet::combined: return "combined";
  }
  return "combined";
}

FeatureSet feature_set_from_name(std::string_view name) {
  if (name == "application_only") return FeatureSet::application_only;
  if (name == "bank_only") return FeatureSet::bank_only;
  if (name == "combined") return FeatureSet::combined;
  raise(Errc::invalid_param, "unknown feature set '" + std::string(name) + "'");
}

std::vector<std::string> features_for(FeatureSet set) {
  std::vector<std::string> out;
  for (const auto& spec : feature_catalog()) {
    const bool app = spec.source == FeatureSource::application;
    if (set == FeatureSet::combined || (set == FeatureSet::application_only && app) ||
        (set == FeatureSet::bank_only && !app))
      out.push_back(spec.name);
  }
  return out;
}

// ---------------------------------------------------------------------------

WoeTable fit_woe_table(const std::vector<FeatureVector>& data, const std::vector<int>& labels,
                       const std::vector<std::string>& features,
                       const PipelineFitOptions& options, const SplitId& split) {
  std::vector<std::pair<std::string, std::vector<BinDefinition>>> bins;
  bins.reserve(features.size());
  for (const auto& name : features) {
    bool categorical = false;
    std::vector<double> numbers;
    std::vector<std::string> codes;
    for (const auto& v : data) {
      const auto it = v.values.find(name);
      if (it == v.values.end()) continue;  // missing values land in the missing bin
      if (is_categorical(it->second)) {
        categorical = true;
        codes.push_back(as_category(it->second));
      } else {
        numbers.push_back(as_number(it->second));
      }
    }
    if (categorical) {
      bins.emplace_back(name, group_rare(codes, labels, options.min_bin_count, name));
    } else if (options.monotonic) {
      bins.emplace_back(name, monotonic_bin(numbers, labels, options.k_init,
                                            options.min_bin_count, name, options.epsilon));
    } else {
      bins.emplace_back(name, quantile_bin(numbers, options.k_init, name));
    }
  }
  return compute_woe_table(bins, data, labels, options.epsilon, split);
}

double FittedPipeline::score(const FeatureVector& v) const {
  if (kind == ModelKind::LR) return predict_proba(lr, v);
  return tree->score(transform_woe(v, table));
}

FittedPipeline fit_pipeline(ModelKind kind, const std::vector<FeatureVector>& data,
                            const std::vector<int>& labels,
                            const std::vector<std::string>& features, const Params& params,
                            const PipelineFitOptions& options, const SplitId& split,
                            std::uint64_t seed) {
  FittedPipeline fitted;
  fitted.kind = kind;
  fitted.table = fit_woe_table(data, labels, features, options, split);
  if (kind == ModelKind::LR) {
    TrainOptions train = options.train;
    if (const auto it = params.find("lambda"); it != params.end()) train.lambda = it->second;
    fitted.lr = train_scorecard(data, labels, fitted.table, train, options.thresholds);
  } else {
    std::vector<std::vector<double>> x;
    x.reserve(data.size());
    for (const auto& v : data) x.push_back(transform_woe(v, fitted.table));
    fitted.tree = fit_benchmark(kind, x, labels, params, seed);
  }
  return fitted;
}

CvResult cross_validate(ModelKind kind, const std::vector<FeatureVector>& data,
                        const std::vector<int>& labels,
                        const std::vector<std::string>& features, const Params& params,
                        const PipelineFitOptions& options, int folds, std::uint64_t seed) {
  const auto fold_of = stratified_folds(labels, folds, seed);
  CvResult result;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<FeatureVector> train_x, valid_x;
    std::vector<int> train_y, valid_y;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == fold) {
        valid_x.push_back(data[i]);
        valid_y.push_back(labels[i]);
      } else {
        train_x.push_back(data[i]);
        train_y.push_back(labels[i]);
      }
    }
    const SplitId split = SplitId::train("fold-" + std::to_string(fold) + "@" + std::to_string(seed));
    const auto fitted = fit_pipeline(kind, train_x, train_y, features, params, options, split,
                                     seed + static_cast<std::uint64_t>(fold));
    std::vector<double> scores;
    scores.reserve(valid_x.size());
    for (const auto& v : valid_x) scores.push_back(fitted.score(v));
    result.fold_auroc.push_back(auroc(valid_y, scores));
  }
  double sum = 0.0;
  for (double a : result.fold_auroc) sum += a;
  result.mean = sum / static_cast<double>(result.fold_auroc.size());
  return result;
}

// ---------------------------------------------------------------------------

SearchSpace default_search_space(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR:
      return {{"lambda", 0.01, 10.0, false, true}};
    case ModelKind::RF:
      return {{"n_trees", 50, 500, true, false}, {"max_depth", 2, 8, true, false}};
    case ModelKind::GB:
      return {{"n_rounds", 50, 500, true, false},
              {"depth", 2, 8, true, false},
              {"learning_rate", 0.01, 0.3, false, true}};
    case ModelKind::AB:
      return {{"n_stumps", 50, 500, true, false}};
  }
  return {};
}

SearchResult random_search(ModelKind kind, const std::vector<FeatureVector>& data,
                           const std::vector<int>& labels,
                           const std::vector<std::string>& features, const SearchSpace& space,
                           int trials, int folds, std::uint64_t seed,
                           const PipelineFitOptions& options) {
  if (space.empty()) raise(Errc::invalid_param, "random_search needs a non-empty space");
  if (trials < 1) raise(Errc::invalid_param, "random_search needs trials >= 1");

  Rng rng(seed);
  SearchResult result;
  for (int trial = 0; trial < trials; ++trial) {
    Params params;
    for (const auto& dim : space) {
      double v;
      if (dim.log_scale)
        v = std::exp(rng.uniform(std::log(dim.lo), std::log(dim.hi)));
      else
        v = rng.uniform(dim.lo, dim.hi);
      if (dim.integer) v = std::floor(v + 0.5);
      params[dim.name] = v;
    }
    const auto cv = cross_validate(kind, data, labels, features, params, options, folds, seed);
    result.trials.push_back({params, cv.mean});
    if (result.trials.size() == 1 || cv.mean > result.best_cv_auroc) {
      result.best = params;
      result.best_cv_auroc = cv.mean;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<AblationResult> run_ablation(const std::vector<FeatureVector>& data,
                                         const std::vector<int>& labels, const SplitPlan& plan,
                                         const std::vector<ModelKind>& kinds,
                                         const std::vector<FeatureSet>& sets,
                                         const PipelineFitOptions& options, int tune_trials,
                                         int tune_folds) {
  if (plan.repeats < 1) raise(Errc::invalid_param, "plan.repeats must be >= 1");
  std::vector<AblationResult> results;

  for (ModelKind kind : kinds) {
    for (FeatureSet set : sets) {
      const auto features = features_for(set);
      AblationResult res;
      res.model_kind = kind;
      res.feature_set = set;
      res.seed = plan.seed;

      for (int repeat = 0; repeat < plan.repeats; ++repeat) {
        const std::uint64_t repeat_seed = plan.seed + 7919ULL * static_cast<std::uint64_t>(repeat);
        const auto fold_of = stratified_folds(labels, plan.fold_count, repeat_seed);
        for (int fold = 0; fold < plan.fold_count; ++fold) {
          std::vector<FeatureVector> train_x, valid_x;
          std::vector<int> train_y, valid_y;
          for (std::size_t i = 0; i < data.size(); ++i) {
            if (fold_of[i] == fold) {
              valid_x.push_back(data[i]);
              valid_y.push_back(labels[i]);
            } else {
              train_x.push_back(data[i]);
              train_y.push_back(labels[i]);
            }
          }

          Params params = default_params(kind);
          if (tune_trials > 0) {
            // Hyperparameters picked inside the training fold only.
            const auto search = random_search(
                kind, train_x, train_y, features, default_search_space(kind), tune_trials,
                tune_folds, repeat_seed + 1000 + static_cast<std::uint64_t>(fold), options);
            params = search.best;
          }
          res.params = params;

          const SplitId split = SplitId::train("ablate-fold-" + std::to_string(fold) + "@" +
                                               std::to_string(repeat_seed));
          const auto fitted = fit_pipeline(kind, train_x, train_y, features, params, options,
                                           split, repeat_seed + static_cast<std::uint64_t>(fold));
          std::vector<double> scores;
          scores.reserve(valid_x.size());
          for (const auto& v : valid_x) scores.push_back(fitted.score(v));
          res.auroc_per_fold.push_back(auroc(valid_y, scores));
        }
      }

      double sum = 0.0;
      for (double a : res.auroc_per_fold) sum += a;
      res.auroc_mean = sum / static_cast<double>(res.auroc_per_fold.size());
      results.push_back(std::move(res));
    }
  }
  return results;
}

std::vector<IvReportRow> iv_report(const WoeTable& table) {
  std::vector<IvReportRow> rows;
  for (const auto& name : table.feature_order()) {
    const auto& fw = table.feature(name);
    rows.push_back({name, fw.iv, fw.iv_class, 0});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const IvReportRow& a, const IvReportRow& b) {
    if (a.iv != b.iv) return a.iv > b.iv;
    return a.feature < b.feature;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
  return rows;
}

}  // namespace cashflow
