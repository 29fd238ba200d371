#include "xgraph/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xgraph/errors.hpp"
#include "xgraph/hr.hpp"
#include "xgraph/rng.hpp"

namespace xgraph {

MaxLinearCoeff MaxLinearCoeff::normalized(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DataError("coefficient matrix must be non-empty");
  }
  if ((a.array() < 0).any()) {
    throw DataError("coefficient matrix must be nonnegative");
  }
  const Vector row_sums = a.rowwise().sum();
  if ((row_sums.array() - 1.0).abs().maxCoeff() > 1e-8) {
    throw DataError("coefficient rows must sum to one (max deviation " +
                    std::to_string((row_sums.array() - 1.0).abs().maxCoeff()) +
                    ")");
  }
  return MaxLinearCoeff{a};
}

void RecursiveMLSpec::validate() const {
  const int d = dag.num_nodes();
  if (node_weight.size() != d) {
    throw DataError("need one node weight per node");
  }
  if ((node_weight.array() <= 0).any()) {
    throw DataError("node weights must be strictly positive");
  }
  for (const auto& [arc, weight] : edge_weight) {
    if (!dag.has_arc(arc.first, arc.second)) {
      throw DataError("weight given for a missing arc");
    }
    if (!(weight > 0)) {
      throw DataError("edge weights must be strictly positive");
    }
  }
  for (const auto& arc : dag.arcs()) {
    if (!edge_weight.count(arc)) {
      throw DataError("arc " + std::to_string(arc.first + 1) + "->" +
                      std::to_string(arc.second + 1) + " has no weight");
    }
  }
}

namespace {

// Lower Cholesky factor with a tiny jitter retry; Sigma^(m) is positive
// definite for strictly valid variograms, so the jitter only absorbs
// round-off on near-degenerate inputs.
Matrix cholesky_factor(const Matrix& sigma) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  Matrix jittered = sigma;
  jittered.diagonal().array() += 1e-12 * (1.0 + sigma.diagonal().maxCoeff());
  llt.compute(jittered);
  if (llt.info() != Eigen::Success) {
    throw DataError("increment covariance is not positive definite");
  }
  return llt.matrixL();
}

// One conditioned draw: fills row with Y^(m).
void draw_y_m_row(Rng& rng, const Matrix& chol, const Vector& mean, int m,
                  Vector& row) {
  const auto d = chol.rows() + 1;
  Vector z(d - 1);
  for (Eigen::Index i = 0; i < d - 1; ++i) z[i] = rng.normal();
  const Vector increment = mean + chol * z;
  const double ym = rng.pareto();
  row[m] = ym;
  const double log_ym = std::log(ym);
  for (Eigen::Index i = 0, r = 0; i < d; ++i) {
    if (i == m) continue;
    row[i] = std::exp(log_ym + increment[r]);
    ++r;
  }
}

}  // namespace

Matrix sample_y_m(const Matrix& gamma, int m, int n, std::uint64_t seed) {
  require_valid_variogram(gamma);
  if (n < 1) {
    throw ConfigError("sample count must be positive");
  }
  if (m < 0 || m >= gamma.rows()) {
    throw DataError("root index out of range");
  }
  const Matrix sigma = gamma_to_sigma_m(gamma, m);
  const Matrix chol = cholesky_factor(sigma);
  const Vector mean = -0.5 * sigma.diagonal();

  Matrix out(n, gamma.rows());
  Rng rng(seed, static_cast<std::uint64_t>(m) + 1);
  Vector row(gamma.rows());
  for (int t = 0; t < n; ++t) {
    draw_y_m_row(rng, chol, mean, m, row);
    out.row(t) = row.transpose();
  }
  return out;
}

Matrix sample_hr_pareto(const Matrix& gamma, int n, std::uint64_t seed,
                        HrSampleStats* stats) {
  require_valid_variogram(gamma);
  if (n < 1) {
    throw ConfigError("sample count must be positive");
  }
  const auto d = gamma.rows();
  std::vector<Matrix> chol;
  std::vector<Vector> mean;
  chol.reserve(d);
  mean.reserve(d);
  for (Eigen::Index m = 0; m < d; ++m) {
    const Matrix sigma = gamma_to_sigma_m(gamma, static_cast<int>(m));
    chol.push_back(cholesky_factor(sigma));
    mean.push_back(-0.5 * sigma.diagonal());
  }

  Matrix out(n, d);
  Rng rng(seed);
  HrSampleStats local;
  Vector row(d);
  for (int t = 0; t < n;) {
    const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    draw_y_m_row(rng, chol[m], mean[m], m, row);
    ++local.proposals;
    int exceed = 0;
    for (Eigen::Index i = 0; i < d; ++i) exceed += row[i] > 1.0;
    // The mixture density is (1/d) * lambda(y) * #exceedances, so accepting
    // with probability 1/#exceedances leaves the exact Pareto law.
    if (exceed == 1 || rng.uniform01() * exceed <= 1.0) {
      out.row(t) = row.transpose();
      ++t;
      ++local.accepted;
    }
  }
  if (stats) *stats = local;
  return out;
}

Matrix ml_coefficients(const RecursiveMLSpec& spec) {
  spec.validate();
  const int d = spec.dag.num_nodes();
  // a(i, j) = c_jj * max-product path weight from j to i; dynamic program in
  // topological order: best(j -> i) = max over parents k of best(j -> k) * c_ki.
  Matrix best = Matrix::Zero(d, d);
  const std::vector<int> order = spec.dag.topological_order();
  for (int j = 0; j < d; ++j) best(j, j) = 1.0;
  for (int i : order) {
    for (int k : spec.dag.parents(i)) {
      const double cki = spec.edge_weight.at({k, i});
      for (int j = 0; j < d; ++j) {
        best(i, j) = std::max(best(i, j), best(k, j) * cki);
      }
    }
  }
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = spec.node_weight[j] * best(i, j);
    }
  }
  return a;
}

Matrix sample_max_linear_any(const Matrix& a, int n, std::uint64_t seed) {
  if (n < 1) {
    throw ConfigError("sample count must be positive");
  }
  if (a.rows() < 1 || a.cols() < 1 || (a.array() < 0).any()) {
    throw DataError("coefficient matrix must be nonnegative and non-empty");
  }
  const auto d = a.rows();
  const auto p = a.cols();
  Matrix out(n, d);
  Rng rng(seed);
  Vector eps(p);
  for (int t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) eps[j] = rng.frechet();
    for (Eigen::Index i = 0; i < d; ++i) {
      double z = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        z = std::max(z, a(i, j) * eps[j]);
      }
      out(t, i) = z;
    }
  }
  return out;
}

Matrix sample_max_linear(const Matrix& a, int n, std::uint64_t seed) {
  MaxLinearCoeff::normalized(a);  // validates rows
  return sample_max_linear_any(a, n, seed);
}

Matrix sample_recursive_max_linear(const RecursiveMLSpec& spec, int n,
                                   std::uint64_t seed) {
  spec.validate();
  if (n < 1) {
    throw ConfigError("sample count must be positive");
  }
  const int d = spec.dag.num_nodes();
  const std::vector<int> order = spec.dag.topological_order();
  Matrix out(n, d);
  Rng rng(seed);
  for (int t = 0; t < n; ++t) {
    for (int i : order) {
      double z = spec.node_weight[i] * rng.frechet();
      for (int k : spec.dag.parents(i)) {
        z = std::max(z, spec.edge_weight.at({k, i}) * out(t, k));
      }
      out(t, i) = z;
    }
  }
  return out;
}

}  // namespace xgraph
