#pragma once

#include <vector>

namespace cashflow {

// ROC curve with tied scores grouped per threshold step. Thresholds descend;
// tpr/fpr are non-decreasing with endpoints (0,0) and (1,1).
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> tpr;
  std::vector<double> fpr;
  double auroc = 0.0;  // trapezoid over the curve
};

// Mann-Whitney pair statistic: (wins + 0.5 * ties) / (n_pos * n_neg).
// Requires both classes (SINGLE_CLASS otherwise). Agrees with the trapezoid
// route on RocCurve to float precision.
double auroc(const std::vector<int>& labels, const std::vector<double>& scores);

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores);

}  // namespace cashflow
