#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binning.hpp"
#include "scorecard.hpp"
#include "splits.hpp"
#include "trees.hpp"

namespace cashflow {

enum class FeatureSet { application_only, bank_only, combined };

std::string_view feature_set_name(FeatureSet s);
FeatureSet feature_set_from_name(std::string_view name);

// Canonical feature names carrying the given source tag(s).
std::vector<std::string> features_for(FeatureSet set);

struct PipelineFitOptions {
  int k_init = kDefaultInitialBins;
  int min_bin_count = kDefaultMinBinCount;
  double epsilon = kDefaultEpsilon;
  bool monotonic = true;  // supervised monotonic binning for numerics
  TrainOptions train;
  RiskThresholds thresholds;
};

// Fits the per-feature binning (monotonic or quantile for numerics,
// rare-category grouping for categoricals) and the WOE table on exactly the
// rows passed in; `split` must name a training fold.
WoeTable fit_woe_table(const std::vector<FeatureVector>& data, const std::vector<int>& labels,
                       const std::vector<std::string>& features,
                       const PipelineFitOptions& options, const SplitId& split);

// One fold-respecting fit: WOE table plus the model of the requested kind,
// everything derived from the training rows only.
struct FittedPipeline {
  WoeTable table;
  ScorecardModel lr;                      // kind == LR
  std::unique_ptr<BenchmarkModel> tree;   // kind != LR
  ModelKind kind = ModelKind::LR;

  double score(const FeatureVector& v) const;
};

FittedPipeline fit_pipeline(ModelKind kind, const std::vector<FeatureVector>& data,
                            const std::vector<int>& labels,
                            const std::vector<std::string>& features, const Params& params,
                            const PipelineFitOptions& options, const SplitId& split,
                            std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_auroc;
  double mean = 0.0;
};

// Stratified k-fold cross-validation with the WOE table (and model) refitted
// inside every training fold.
CvResult cross_validate(ModelKind kind, const std::vector<FeatureVector>& data,
                        const std::vector<int>& labels,
                        const std::vector<std::string>& features, const Params& params,
                        const PipelineFitOptions& options, int folds, std::uint64_t seed);

struct SearchDimension {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool integer = false;
  bool log_scale = false;
};
using SearchSpace = std::vector<SearchDimension>;

// Tree count 50-500, depth 2-8, learning rate 0.01-0.3, stump count 50-500.
SearchSpace default_search_space(ModelKind kind);

struct SearchTrial {
  Params params;
  double cv_auroc = 0.0;
};

struct SearchResult {
  Params best;
  double best_cv_auroc = 0.0;
  std::vector<SearchTrial> trials;
};

// 50-trial random search scored by stratified k-fold CV AUROC; ties keep the
// first-sampled candidate.
SearchResult random_search(ModelKind kind, const std::vector<FeatureVector>& data,
                           const std::vector<int>& labels,
                           const std::vector<std::string>& features, const SearchSpace& space,
                           int trials, int folds, std::uint64_t seed,
                           const PipelineFitOptions& options);

struct AblationResult {
  ModelKind model_kind = ModelKind::LR;
  FeatureSet feature_set = FeatureSet::combined;
  double auroc_mean = 0.0;
  std::vector<double> auroc_per_fold;
  std::uint64_t seed = 0;
  Params params;
};

// Per (kind, feature set): stratified CV with fold-local binning; when
// tune_trials > 0 an inner random search (tune_folds folds) picks the
// hyperparameters inside each training fold.
std::vector<AblationResult> run_ablation(const std::vector<FeatureVector>& data,
                                         const std::vector<int>& labels, const SplitPlan& plan,
                                         const std::vector<ModelKind>& kinds,
                                         const std::vector<FeatureSet>& sets,
                                         const PipelineFitOptions& options, int tune_trials = 0,
                                         int tune_folds = 3);

struct IvReportRow {
  std::string feature;
  double iv = 0.0;
  IvClass iv_class = IvClass::not_predictive;
  int rank = 0;
};

// Features ranked by descending IV.
std::vector<IvReportRow> iv_report(const WoeTable& table);

}  // namespace cashflow
