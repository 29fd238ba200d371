#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "xgraph/graph.hpp"
#include "xgraph/linalg.hpp"

namespace xgraph {

// Max-linear coefficient matrix Z_i = max_j A(i,j) * eps_j with independent
// standard Frechet noise. Rows summing to one give standard Frechet margins.
struct MaxLinearCoeff {
  Matrix a;

  // Validates nonnegative entries and unit row sums (tolerance 1e-8).
  static MaxLinearCoeff normalized(const Matrix& a);
};

// Recursive max-linear model on a DAG:
//   Z_i = max( max_{k in pa(i)} c_ki Z_k, c_ii eps_i ).
struct RecursiveMLSpec {
  Dag dag;
  std::map<Edge, double> edge_weight;  // c_ki for each arc (k, i)
  Vector node_weight;                  // c_ii, strictly positive

  void validate() const;
};

// Draws from Y | {Y_m > 1} for a Husler-Reiss Pareto vector: column m is
// standard Pareto on (1, inf) and, independently, the log-increments
// log Y_i - log Y_m are Gaussian with mean -diag(Sigma^(m))/2 and covariance
// Sigma^(m). Rows are samples.
Matrix sample_y_m(const Matrix& gamma, int m, int n, std::uint64_t seed);

struct HrSampleStats {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
};

// Exact draws of the unconditional Husler-Reiss Pareto vector on
// {max_i y_i > 1}: propose from a uniform-root mixture of the conditioned
// vectors and accept with probability 1 / #{i : y_i > 1}.
Matrix sample_hr_pareto(const Matrix& gamma, int n, std::uint64_t seed,
                        HrSampleStats* stats = nullptr);

// Coefficient matrix of the max-linear representation of a recursive
// max-linear model: A(i,j) = c_jj * max over directed paths from j to i of
// the product of edge weights, A(i,i) = c_ii, zero when no path exists.
// Rows are not normalized.
Matrix ml_coefficients(const RecursiveMLSpec& spec);

// Samples the max-linear model. Requires unit row sums (within 1e-8).
Matrix sample_max_linear(const Matrix& a, int n, std::uint64_t seed);

// Same sampler without the row-sum requirement; margins are Frechet with
// scale equal to the row sum.
Matrix sample_max_linear_any(const Matrix& a, int n, std::uint64_t seed);

// Samples by recursion in topological order. Distributed as
// sample_max_linear_any(ml_coefficients(spec)).
Matrix sample_recursive_max_linear(const RecursiveMLSpec& spec, int n,
                                   std::uint64_t seed);

}  // namespace xgraph
