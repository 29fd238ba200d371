#pragma once

#include <string>
#include <vector>

#include "xgraph/estimators.hpp"
#include "xgraph/graph.hpp"
#include "xgraph/hr.hpp"
#include "xgraph/linalg.hpp"

namespace xgraph {

// Outcome of a structure learning method: the estimated graph, the
// method-specific per-edge scores (tree weights, vote counts, or coefficient
// magnitudes), the penalty used, and whether the graph is connected.
struct LearnResult {
  UndirectedGraph graph;
  Matrix scores;
  double penalty = 0.0;
  bool connected = false;
  std::vector<std::string> warnings;
};

enum class EmstWeight { variogram, chi };

// Extremal minimum spanning tree on empirical weights: Gamma_ij for the
// variogram variant, -log chi_ij for the extremal correlation variant
// (pairs with chi = 0 are treated as unusable, i.e. infinite weight).
LearnResult emst(const Matrix& x, const EstimatorConfig& cfg,
                 EmstWeight weight_kind);

// Majority-voting structure learning: for each root m the support of the
// increment precision matrix is estimated by L1-penalized node-wise
// regressions over the k exceedance rows of column m, and an edge enters the
// graph when it is selected in a strict majority of the d-2 roots that can
// see it.
LearnResult eglearn(const Matrix& x, const EstimatorConfig& cfg, double rho);

struct Emtp2Options {
  int max_iter = 10000;      // full coordinate sweeps
  double kkt_tol = 1e-8;     // max KKT residual
};

// Surrogate maximum likelihood under the constraint that Theta is a graph
// Laplacian (all off-diagonal entries <= 0). The stationarity conditions
// make the fitted variogram match the input on selected edges and dominate
// it elsewhere.
FittedModel emtp2_fit(const Matrix& gamma_hat,
                      const Emtp2Options& options = {});

struct ShiftFitOptions {
  int max_iter = 10000;
  double tol = 1e-7;  // subgradient residual
};

struct ShiftFit {
  LearnResult result;
  Matrix theta;       // shifted-back estimate Theta* - c 11'
  Matrix theta_star;  // full-rank estimate
  bool valid_hr = false;
};

// Graphical lasso on the shifted parameter matrix Theta* = Theta + c 11':
// minimize -log det(T) + tr(T Sigma*) + lambda * sum_{i != j} |T_ij - c|
// over positive definite T, with Sigma* built from the empirical variogram.
// The returned Theta is not guaranteed to be a valid precision matrix; see
// the valid_hr flag.
ShiftFit parameter_shift_fit(const Matrix& gamma_hat, double lambda, double c,
                             const ShiftFitOptions& options = {});

// Objective value of the (deliberately unsolved) extremal graphical lasso,
// -loglik + lambda * off-diagonal L1 norm; exposed for diagnostics only
// because direct minimization yields dense solutions.
double eglasso_objective(const Matrix& theta, const Matrix& gbar,
                         double lambda);

// Node-wise lasso solved by cyclic coordinate descent to duality gap `tol`;
// exposed for tests. Design matrix columns and the response are used as
// given (callers center them).
Vector lasso_cd(const Matrix& design, const Vector& response, double rho,
                double tol = 1e-7, int max_iter = 100000);

}  // namespace xgraph
