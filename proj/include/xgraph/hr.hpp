#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "xgraph/graph.hpp"
#include "xgraph/linalg.hpp"

namespace xgraph {

// Validity slack for estimated variogram inputs: Gamma is accepted when the
// smallest eigenvalue of center_project(-Gamma/2) is >= -kValiditySlack times
// the largest one, and the rank is exactly d-1.
inline constexpr double kValiditySlack = 1e-8;

// A d x d variogram matrix parameterizes a Husler-Reiss model: symmetric,
// zero diagonal, positive off-diagonal, strictly conditionally negative
// definite (center_project(-Gamma/2) positive semidefinite of rank d-1).
bool is_valid_variogram(const Matrix& gamma, std::string* why = nullptr);
void require_valid_variogram(const Matrix& gamma);

// A Husler-Reiss precision matrix: symmetric positive semidefinite with zero
// row sums and rank d-1. Off-diagonal zeros encode the extremal graph.
bool is_valid_precision(const Matrix& theta, std::string* why = nullptr);
void require_valid_precision(const Matrix& theta);

// Theta = (P (-Gamma/2) P)^+ . Throws DataError on invalid variograms.
Matrix gamma_to_theta(const Matrix& gamma);

// Inverse map: Gamma_ij = S_ii + S_jj - 2 S_ij with S = Theta^+.
Matrix theta_to_gamma(const Matrix& theta);

// Covariance of the log-increments relative to root m (0-based):
// Sigma_ij = (Gamma_im + Gamma_jm - Gamma_ij) / 2 for i, j != m, a positive
// definite (d-1) x (d-1) matrix indexed by the remaining nodes in order.
Matrix gamma_to_sigma_m(const Matrix& gamma, int m);

// Rebuild the full variogram from the root-m increment covariance:
// Gamma_im = Sigma_ii and Gamma_ij = Sigma_ii + Sigma_jj - 2 Sigma_ij.
Matrix sigma_m_to_gamma(const Matrix& sigma, int m);

double std_normal_cdf(double x);

// Bivariate extremal correlation chi_ij = 2 - 2 Phi(sqrt(Gamma_ij)/2);
// diagonal 1.
Matrix hr_chi(const Matrix& gamma);

// Exponent measure density including the normalizing constant, so that
// the normalization property integral_{y_m > 1} density = 1 holds for every
// m and the homogeneity density(t y) = t^(-d-1) density(y) holds for t > 0.
double exponent_density(const Matrix& gamma, const Vector& y);
double log_exponent_density(const Matrix& gamma, const Vector& y);

// Surrogate positive semidefinite Gaussian log-likelihood
//   l(Theta; Gbar) = log pseudo-det(Theta) + tr(Theta * Gbar) / 2.
double surrogate_loglik(const Matrix& theta, const Matrix& gbar);

// A variogram known only on the edges of a connected graph. Unknown entries
// are NaN; the diagonal is zero.
class PartialVariogram {
 public:
  // Keeps exactly the edge entries of a fully (or partially) specified
  // matrix; all edge entries must be present (non-NaN).
  PartialVariogram(UndirectedGraph graph, const Matrix& entries);

  // Strict variant for files: entries off the graph must be NaN.
  static PartialVariogram strict(UndirectedGraph graph, const Matrix& entries);

  const UndirectedGraph& graph() const { return graph_; }
  // d x d matrix with NaN off the known pattern.
  const Matrix& entries() const { return entries_; }
  double entry(int i, int j) const { return entries_(i, j); }
  int dim() const { return graph_.num_nodes(); }

 private:
  UndirectedGraph graph_;
  Matrix entries_;
};

// A fitted Husler-Reiss graphical model.
struct FittedModel {
  UndirectedGraph graph;
  Matrix gamma;
  Matrix theta;
  std::optional<double> threshold_p;
  std::string method;
  double penalty = 0.0;
};

struct CompletionOptions {
  int max_iter = 10000;       // sweeps for the non-decomposable iteration
  double tol = 1e-8;          // max Gamma entry change per sweep
};

// Unique variogram completion: Gamma agrees with the known entries on the
// edges and the implied precision matrix vanishes on non-edges. Decomposable
// graphs are completed in finitely many vertex-elimination steps; general
// graphs by an iterative fixed point over edges (ConvergenceError when the
// iteration does not settle, e.g. when no valid completion exists).
FittedModel complete_gamma(const PartialVariogram& pv,
                           const CompletionOptions& options = {});

// Path-sum completion for trees and block graphs: a non-edge entry is the
// sum of the known entries along the unique shortest path.
Matrix complete_tree_blockgraph(const PartialVariogram& pv);

struct MetricCheck {
  bool ok = true;
  // Triples (i, j, k) with Gamma_ij > Gamma_ik + Gamma_jk.
  std::vector<std::array<int, 3>> violations;
};

// Checks all triangle inequalities Gamma_ij <= Gamma_ik + Gamma_jk with
// 1e-10 slack.
MetricCheck check_metric_property(const Matrix& gamma);

}  // namespace xgraph
