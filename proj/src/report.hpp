#pragma once

#include <string>
#include <vector>

#include "experiments.hpp"
#include "metrics.hpp"

namespace cashflow {

// Machine-readable results table: model,feature_set,fold,auroc,seed,params_hash
std::string results_csv(const std::vector<AblationResult>& results);

// feature,iv,iv_class,rank
std::string iv_csv(const std::vector<IvReportRow>& rows);

// Deterministic standalone SVG documents.
std::string svg_roc_curves(const std::vector<std::pair<std::string, RocCurve>>& curves);
std::string svg_iv_bars(const std::vector<IvReportRow>& rows);

// Short content hash used in results tables.
std::string params_hash(const Params& params);

}  // namespace cashflow
