#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cashflow {

enum class ModelKind { LR, RF, GB, AB };

std::string_view model_kind_name(ModelKind k);
ModelKind model_kind_from_name(std::string_view name);

// A fitted benchmark scorer over numeric (WOE-transformed) rows. Higher
// score means higher default risk.
class BenchmarkModel {
 public:
  virtual ~BenchmarkModel() = default;
  virtual double score(const std::vector<double>& row) const = 0;
};

using Params = std::map<std::string, double>;

Params default_params(ModelKind kind);

// From-scratch ensembles, deterministic per seed:
//   RF - bagged depth-limited CART trees with per-split feature subsampling,
//        score = mean leaf event rate across trees;
//   GB - stagewise regression trees on the log-odds gradient with shrinkage
//        and Newton leaf values;
//   AB - SAMME-weighted decision stumps, vote margin through a sigmoid.
// Unknown or out-of-range parameters raise INVALID_PARAM; single-class data
// raises SINGLE_CLASS.
std::unique_ptr<BenchmarkModel> fit_benchmark(ModelKind kind,
                                              const std::vector<std::vector<double>>& x,
                                              const std::vector<int>& y, const Params& params,
                                              std::uint64_t seed);

}  // namespace cashflow
