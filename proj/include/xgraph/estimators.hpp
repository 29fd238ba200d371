#pragma once

#include <vector>

#include "xgraph/hr.hpp"
#include "xgraph/linalg.hpp"

namespace xgraph {

// Threshold configuration for the tail estimators. With n observations the
// effective sample size per direction is k = ceil(n * (1 - p)).
struct EstimatorConfig {
  double p = 0.95;

  int k_for(int n) const;
  void validate() const;
};

// Column-wise empirical standardization to Pareto scale:
// x -> (n+1) / (n+1 - rank(x)), with average ranks for ties. Values lie in
// [(n+1)/n, n+1]. Throws DataError when a column is constant.
Matrix rank_pareto_transform(const Matrix& x);

// Indices of the k rows with the largest values in the given column of the
// Pareto-scale data, ties broken by row index.
std::vector<int> top_k_rows(const Matrix& pareto, int column, int k);

// Empirical extremal variogram rooted at m: the sample variance of the
// log-increment differences over the k largest observations in column m.
Matrix emp_vario_m(const Matrix& x, int m, const EstimatorConfig& cfg);

// Joint estimator: the average of the d rooted variograms.
Matrix emp_vario_joint(const Matrix& x, const EstimatorConfig& cfg);

// Empirical extremal correlation: the fraction of joint exceedances of the
// per-column rank thresholds among exceedances of one column, averaged over
// the two conditioning directions. Diagonal one.
Matrix emp_chi(const Matrix& x, const EstimatorConfig& cfg);

struct EvalScore {
  double score = 0.0;
  // True when the score is relative to the saturated fit on the test data;
  // false when the test variogram is not a valid variogram and the raw
  // log-likelihood is reported instead.
  bool relative = true;
};

// Test log-likelihood of a fitted model, reported relative to the saturated
// model refitted on the test data (higher is better, saturated scores 0).
EvalScore evaluate_loglik(const FittedModel& model, const Matrix& x_test,
                          const EstimatorConfig& cfg);

}  // namespace xgraph
