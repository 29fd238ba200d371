#include "xgraph/hr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "xgraph/errors.hpp"

namespace xgraph {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_square_dim(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw DataError(std::string(what) + " must be square with dimension >= 2");
  }
}

bool symmetric_enough(const Matrix& m) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

}  // namespace

bool is_valid_variogram(const Matrix& gamma, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (gamma.rows() != gamma.cols() || gamma.rows() < 2) {
    return fail("variogram must be square with dimension >= 2");
  }
  if (!symmetric_enough(gamma)) {
    return fail("variogram must be symmetric");
  }
  const double scale = 1.0 + gamma.cwiseAbs().maxCoeff();
  if (gamma.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    return fail("variogram diagonal must be zero");
  }
  const auto d = gamma.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (!(gamma(i, j) > 0) || !std::isfinite(gamma(i, j))) {
        return fail("variogram off-diagonal entries must be positive, got " +
                    std::to_string(gamma(i, j)) + " at (" + std::to_string(i) +
                    "," + std::to_string(j) + ")");
      }
    }
  }
  const EigenSym es = eigen_sym(center_project(-0.5 * gamma));
  const double max_eig = es.values.maxCoeff();
  if (max_eig <= 0) {
    return fail("variogram is not conditionally negative definite");
  }
  if (es.values.minCoeff() < -kValiditySlack * max_eig) {
    return fail("variogram is not conditionally negative definite (min "
                "centered eigenvalue " +
                std::to_string(es.values.minCoeff()) + ")");
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (es.values[i] > kEigenTol * max_eig) ++rank;
  }
  if (rank != d - 1) {
    return fail("centered variogram must have rank d-1, got " +
                std::to_string(rank));
  }
  return true;
}

void require_valid_variogram(const Matrix& gamma) {
  std::string why;
  if (!is_valid_variogram(gamma, &why)) {
    throw DataError("invalid variogram: " + why);
  }
}

bool is_valid_precision(const Matrix& theta, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (theta.rows() != theta.cols() || theta.rows() < 2) {
    return fail("precision matrix must be square with dimension >= 2");
  }
  if (!symmetric_enough(theta)) {
    return fail("precision matrix must be symmetric");
  }
  const auto d = theta.rows();
  const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
  const double max_row_sum = theta.rowwise().sum().cwiseAbs().maxCoeff();
  if (max_row_sum > 1e-8 * scale) {
    return fail("precision row sums must vanish, max |row sum| = " +
                std::to_string(max_row_sum));
  }
  const EigenSym es = eigen_sym(theta);
  const double max_eig = es.values.maxCoeff();
  if (max_eig <= 0) {
    return fail("precision matrix must be positive semidefinite");
  }
  if (es.values.minCoeff() < -kValiditySlack * max_eig) {
    return fail("precision matrix must be positive semidefinite, min "
                "eigenvalue " +
                std::to_string(es.values.minCoeff()));
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (es.values[i] > kEigenTol * max_eig) ++rank;
  }
  if (rank != d - 1) {
    return fail("precision matrix must have rank d-1, got rank " +
                std::to_string(rank));
  }
  return true;
}

void require_valid_precision(const Matrix& theta) {
  std::string why;
  if (!is_valid_precision(theta, &why)) {
    throw DataError("invalid precision matrix: " + why);
  }
}

Matrix gamma_to_theta(const Matrix& gamma) {
  require_valid_variogram(gamma);
  return pseudo_inverse(center_project(-0.5 * gamma));
}

Matrix theta_to_gamma(const Matrix& theta) {
  require_valid_precision(theta);
  const Matrix sigma = pseudo_inverse(theta);
  const auto d = theta.rows();
  Matrix gamma(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    gamma(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double value = sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
      gamma(i, j) = value;
      gamma(j, i) = value;
    }
  }
  return gamma;
}

Matrix gamma_to_sigma_m(const Matrix& gamma, int m) {
  require_valid_variogram(gamma);
  const auto d = gamma.rows();
  if (m < 0 || m >= d) {
    throw DataError("root index out of range");
  }
  Matrix sigma(d - 1, d - 1);
  for (Eigen::Index i = 0, r = 0; i < d; ++i) {
    if (i == m) continue;
    for (Eigen::Index j = 0, c = 0; j < d; ++j) {
      if (j == m) continue;
      sigma(r, c) = 0.5 * (gamma(i, m) + gamma(j, m) - gamma(i, j));
      ++c;
    }
    ++r;
  }
  return sigma;
}

Matrix sigma_m_to_gamma(const Matrix& sigma, int m) {
  require_square_dim(sigma, "increment covariance");
  const auto d = sigma.rows() + 1;
  if (m < 0 || m >= d) {
    throw DataError("root index out of range");
  }
  auto full_index = [&](Eigen::Index r) { return r < m ? r : r + 1; };
  Matrix gamma = Matrix::Zero(d, d);
  for (Eigen::Index r = 0; r < sigma.rows(); ++r) {
    const auto i = full_index(r);
    gamma(i, m) = gamma(m, i) = sigma(r, r);
    for (Eigen::Index c = r + 1; c < sigma.cols(); ++c) {
      const auto j = full_index(c);
      const double value = sigma(r, r) + sigma(c, c) - 2.0 * sigma(r, c);
      gamma(i, j) = gamma(j, i) = value;
    }
  }
  return gamma;
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

Matrix hr_chi(const Matrix& gamma) {
  require_valid_variogram(gamma);
  const auto d = gamma.rows();
  Matrix chi = Matrix::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double value = 2.0 * (1.0 - std_normal_cdf(0.5 * std::sqrt(gamma(i, j))));
      chi(i, j) = value;
      chi(j, i) = value;
    }
  }
  return chi;
}

double log_exponent_density(const Matrix& gamma, const Vector& y) {
  require_valid_variogram(gamma);
  const auto d = gamma.rows();
  if (y.size() != d) {
    throw DataError("point dimension does not match variogram dimension");
  }
  if ((y.array() <= 0).any()) {
    throw DataError("exponent density requires strictly positive coordinates");
  }
  // Root-1 lognormal form: the Gaussian factor over the log-increments fixes
  // the constant so that the mass of {y_m > 1} is one for every root m.
  const int m = 0;
  const Matrix sigma = gamma_to_sigma_m(gamma, m);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DataError("increment covariance is not positive definite");
  }
  Vector z(d - 1);
  const double log_ym = std::log(y[m]);
  for (Eigen::Index i = 1; i < d; ++i) {
    z[i - 1] = std::log(y[i]) - log_ym + 0.5 * gamma(i, m);
  }
  const Vector half = llt.matrixL().solve(z);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d - 1; ++i) {
    log_det += std::log(llt.matrixL()(i, i));
  }
  double log_density = -2.0 * log_ym;
  for (Eigen::Index i = 1; i < d; ++i) {
    log_density -= std::log(y[i]);
  }
  log_density -= 0.5 * (d - 1) * std::log(2.0 * std::numbers::pi);
  log_density -= log_det;
  log_density -= 0.5 * half.squaredNorm();
  return log_density;
}

double exponent_density(const Matrix& gamma, const Vector& y) {
  return std::exp(log_exponent_density(gamma, y));
}

double surrogate_loglik(const Matrix& theta, const Matrix& gbar) {
  require_valid_precision(theta);
  if (gbar.rows() != theta.rows() || gbar.cols() != theta.cols()) {
    throw DataError("dimension mismatch between precision and variogram");
  }
  if (!symmetric_enough(gbar)) {
    throw DataError("variogram estimate must be symmetric");
  }
  const double scale = 1.0 + gbar.cwiseAbs().maxCoeff();
  if (gbar.diagonal().cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DataError("variogram estimate must have zero diagonal");
  }
  return log_pseudo_determinant(theta) +
         0.5 * theta.cwiseProduct(gbar).sum();
}

PartialVariogram::PartialVariogram(UndirectedGraph graph, const Matrix& entries)
    : graph_(std::move(graph)), entries_() {
  const int d = graph_.num_nodes();
  if (entries.rows() != d || entries.cols() != d) {
    throw DataError("partial variogram entries must be " + std::to_string(d) +
                    "x" + std::to_string(d));
  }
  entries_ = Matrix::Constant(d, d, kNaN);
  entries_.diagonal().setZero();
  for (const auto& [i, j] : graph_.edges()) {
    const double value = 0.5 * (entries(i, j) + entries(j, i));
    if (!std::isfinite(value) || !(value > 0)) {
      throw DataError("edge (" + std::to_string(i + 1) + "," +
                      std::to_string(j + 1) +
                      ") needs a positive variogram entry");
    }
    entries_(i, j) = value;
    entries_(j, i) = value;
  }
}

PartialVariogram PartialVariogram::strict(UndirectedGraph graph,
                                          const Matrix& entries) {
  const int d = graph.num_nodes();
  if (entries.rows() != d || entries.cols() != d) {
    throw DataError("partial variogram entries must match the graph size");
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!graph.has_edge(i, j) && std::isfinite(entries(i, j))) {
        throw DataError("entry (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) +
                        ") is specified but (i,j) is not an edge");
      }
    }
  }
  return PartialVariogram(std::move(graph), entries);
}

namespace {

void validate_clique_submatrices(const PartialVariogram& pv) {
  for (const auto& clique : cliques(pv.graph())) {
    const int q = static_cast<int>(clique.size());
    if (q < 2) continue;
    Matrix sub(q, q);
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        sub(a, b) = a == b ? 0.0 : pv.entry(clique[a], clique[b]);
      }
    }
    std::string why;
    if (q >= 2 && !is_valid_variogram(sub, &why)) {
      throw DataError("clique submatrix is not a valid variogram: " + why);
    }
  }
}

// Conditional-independence fill: visit vertices in maximum cardinality
// search order; each new vertex w attaches to the previously visited set
// through the clique S of its visited neighbors, and every entry to a
// non-neighbor h is implied by w independent of h given S.
Matrix complete_decomposable(const PartialVariogram& pv,
                             const std::vector<int>& elimination_order) {
  const int d = pv.dim();
  const auto& graph = pv.graph();
  Matrix gamma = pv.entries();

  std::vector<int> visit_order(elimination_order.rbegin(),
                               elimination_order.rend());
  std::vector<char> visited(d, 0);
  std::vector<int> placed;
  placed.reserve(d);

  for (int w : visit_order) {
    std::vector<int> sep;
    for (int v : graph.neighbors(w)) {
      if (visited[v]) sep.push_back(v);
    }
    if (!placed.empty() && sep.empty()) {
      throw DataError("graph must be connected for completion");
    }
    if (!placed.empty()) {
      const int m = *std::min_element(sep.begin(), sep.end());
      std::vector<int> rest;  // S \ {m}
      for (int v : sep) {
        if (v != m) rest.push_back(v);
      }
      const int q = static_cast<int>(rest.size());
      auto sigma_entry = [&](int a, int b) {
        return 0.5 * (gamma(a, m) + gamma(b, m) - gamma(a, b));
      };
      Eigen::LLT<Matrix> llt;
      Vector a_vec(q);
      if (q > 0) {
        Matrix k(q, q);
        for (int x = 0; x < q; ++x) {
          for (int y = 0; y < q; ++y) {
            k(x, y) = sigma_entry(rest[x], rest[y]);
          }
          a_vec[x] = sigma_entry(w, rest[x]);
        }
        llt.compute(k);
        if (llt.info() != Eigen::Success) {
          throw DataError("separator covariance is not positive definite");
        }
      }
      for (int h : placed) {
        if (graph.has_edge(w, h) || h == m) continue;
        double swh = 0.0;
        if (q > 0) {
          Vector b_vec(q);
          for (int x = 0; x < q; ++x) b_vec[x] = sigma_entry(h, rest[x]);
          swh = a_vec.dot(llt.solve(b_vec));
        }
        const double value = gamma(w, m) + gamma(h, m) - 2.0 * swh;
        gamma(w, h) = value;
        gamma(h, w) = value;
      }
    }
    visited[w] = 1;
    placed.push_back(w);
  }
  return gamma;
}

// Laplacian edge-weight representation of the precision matrix: Theta is
// kept supported on the graph by construction and its weights are adjusted
// one edge at a time until the implied variogram matches the known entries.
Matrix complete_general(const PartialVariogram& pv,
                        const CompletionOptions& options) {
  const int d = pv.dim();
  const auto& graph = pv.graph();
  const std::vector<Edge> edge_list(graph.edges().begin(),
                                    graph.edges().end());

  Matrix theta = Matrix::Zero(d, d);
  for (const auto& [i, j] : edge_list) {
    const double w = 1.0 / pv.entry(i, j);
    theta(i, i) += w;
    theta(j, j) += w;
    theta(i, j) -= w;
    theta(j, i) -= w;
  }
  Matrix sigma = pseudo_inverse(theta);

  double scale = 1.0;
  for (const auto& [i, j] : edge_list) {
    scale = std::max(scale, std::abs(pv.entry(i, j)));
  }
  auto resistance = [&](int i, int j) {
    return sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
  };

  for (int sweep = 0; sweep < options.max_iter; ++sweep) {
    double max_change = 0.0;
    for (const auto& [i, j] : edge_list) {
      const double target = pv.entry(i, j);
      const double current = resistance(i, j);
      if (!(current > 0) || !std::isfinite(current)) {
        throw ConvergenceError("completion iteration left the valid cone");
      }
      const double t = 1.0 / target - 1.0 / current;
      if (t == 0.0) continue;
      // Rank-one update of Theta and its pseudo-inverse; the kernel stays
      // the all-ones vector because 1 + t * current = current/target > 0.
      const Vector su = sigma.col(i) - sigma.col(j);
      const double denom = 1.0 + t * current;
      sigma.noalias() -= (t / denom) * su * su.transpose();
      theta(i, i) += t;
      theta(j, j) += t;
      theta(i, j) -= t;
      theta(j, i) -= t;
      max_change = std::max(max_change, std::abs(target - current));
    }
    // Periodic refresh against accumulated rank-one round-off.
    if ((sweep + 1) % 64 == 0) {
      sigma = pseudo_inverse(theta);
    }
    if (max_change < options.tol * scale) {
      Matrix gamma(d, d);
      sigma = pseudo_inverse(theta);
      for (int i = 0; i < d; ++i) {
        gamma(i, i) = 0.0;
        for (int j = i + 1; j < d; ++j) {
          gamma(i, j) = gamma(j, i) = resistance(i, j);
        }
      }
      return gamma;
    }
  }
  throw ConvergenceError(
      "variogram completion did not converge in " +
      std::to_string(options.max_iter) +
      " sweeps; the partial matrix may admit no valid completion");
}

}  // namespace

FittedModel complete_gamma(const PartialVariogram& pv,
                           const CompletionOptions& options) {
  const auto& graph = pv.graph();
  if (!graph.is_connected()) {
    throw DataError("completion requires a connected graph");
  }
  validate_clique_submatrices(pv);

  Matrix gamma;
  const DecomposableCheck check = is_decomposable(graph);
  if (check.decomposable) {
    gamma = complete_decomposable(pv, check.elimination_order);
  } else {
    gamma = complete_general(pv, options);
  }

  std::string why;
  if (!is_valid_variogram(gamma, &why)) {
    throw DataError("completed matrix is not a valid variogram: " + why);
  }
  return FittedModel{graph, gamma, gamma_to_theta(gamma), std::nullopt,
                     "completion", 0.0};
}

Matrix complete_tree_blockgraph(const PartialVariogram& pv) {
  const auto& graph = pv.graph();
  if (!graph.is_connected()) {
    throw DataError("completion requires a connected graph");
  }
  // Block graph check: connected, and every biconnected component is a
  // clique (trees are the special case where all blocks are single edges).
  const DecomposableCheck check = is_decomposable(graph);
  if (!check.decomposable) {
    throw DataError("path-sum completion requires a tree or block graph");
  }
  const auto clique_list = cliques(graph);
  for (std::size_t a = 0; a < clique_list.size(); ++a) {
    for (std::size_t b = a + 1; b < clique_list.size(); ++b) {
      std::vector<int> inter;
      std::set_intersection(clique_list[a].begin(), clique_list[a].end(),
                            clique_list[b].begin(), clique_list[b].end(),
                            std::back_inserter(inter));
      if (inter.size() > 1) {
        throw DataError("path-sum completion requires singleton separators "
                        "(tree or block graph)");
      }
    }
  }

  const int d = pv.dim();
  Matrix gamma = pv.entries();
  for (int i = 0; i < d; ++i) {
    gamma(i, i) = 0.0;
    // BFS shortest paths from i; in a block graph the shortest path between
    // two nodes is unique.
    std::vector<int> prev(d, -1);
    std::vector<int> queue{i};
    prev[i] = i;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int w : graph.neighbors(v)) {
        if (prev[w] < 0) {
          prev[w] = v;
          queue.push_back(w);
        }
      }
    }
    for (int j = 0; j < d; ++j) {
      if (j == i || graph.has_edge(i, j)) continue;
      double total = 0.0;
      for (int v = j; v != i; v = prev[v]) total += pv.entry(prev[v], v);
      gamma(i, j) = total;
    }
  }
  return symmetrize(gamma);
}

MetricCheck check_metric_property(const Matrix& gamma) {
  require_valid_variogram(gamma);
  const auto d = gamma.rows();
  MetricCheck check;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) {
        if (k == i || k == j) continue;
        if (gamma(i, j) > gamma(i, k) + gamma(j, k) + 1e-10) {
          check.ok = false;
          check.violations.push_back({static_cast<int>(i),
                                      static_cast<int>(j),
                                      static_cast<int>(k)});
        }
      }
    }
  }
  return check;
}

}  // namespace xgraph
