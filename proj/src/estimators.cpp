#include "xgraph/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xgraph/errors.hpp"

namespace xgraph {

int EstimatorConfig::k_for(int n) const {
  validate();
  // ceil(n * (1 - p)) with protection against round-off: n * (1 - 0.95)
  // must give k = n/20 exactly.
  const double raw = n * (1.0 - p);
  return static_cast<int>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

void EstimatorConfig::validate() const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ConfigError("threshold probability p must lie in (0, 1), got " +
                      std::to_string(p));
  }
}

Matrix rank_pareto_transform(const Matrix& x) {
  const auto n = x.rows();
  const auto d = x.cols();
  if (n < 2) {
    throw DataError("need at least two observations");
  }
  Matrix out(n, d);
  std::vector<int> order(n);
  for (Eigen::Index j = 0; j < d; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return x(a, j) < x(b, j);
    });
    if (x(order.front(), j) == x(order.back(), j)) {
      throw DataError("column " + std::to_string(j + 1) +
                      " is constant; margins cannot be standardized");
    }
    // Average ranks over tied blocks, then map to (n+1)/(n+1-rank).
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index stop = start;
      while (stop + 1 < n && x(order[stop + 1], j) == x(order[start], j)) {
        ++stop;
      }
      const double avg_rank = 0.5 * (start + stop) + 1.0;
      const double value = (n + 1.0) / (n + 1.0 - avg_rank);
      for (Eigen::Index t = start; t <= stop; ++t) {
        out(order[t], j) = value;
      }
      start = stop + 1;
    }
  }
  return out;
}

std::vector<int> top_k_rows(const Matrix& pareto, int column, int k) {
  const auto n = pareto.rows();
  if (k < 1 || k > n) {
    throw ConfigError("exceedance count k out of range");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pareto(a, column) != pareto(b, column)) {
      return pareto(a, column) > pareto(b, column);
    }
    return a < b;
  });
  order.resize(k);
  return order;
}

namespace {

// Variogram rooted at m from already Pareto-standardized data.
Matrix vario_m_on_pareto(const Matrix& pareto, int m, int k) {
  const auto d = pareto.cols();
  const std::vector<int> rows = top_k_rows(pareto, m, k);

  Matrix logs(k, d);
  for (int t = 0; t < k; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) {
      logs(t, j) = std::log(pareto(rows[t], j));
    }
  }
  const Eigen::RowVectorXd mean = logs.colwise().mean();

  Matrix vario = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double ss = 0.0;
      for (int t = 0; t < k; ++t) {
        const double dev = (logs(t, i) - mean[i]) - (logs(t, j) - mean[j]);
        ss += dev * dev;
      }
      const double value = ss / (k - 1);
      vario(i, j) = value;
      vario(j, i) = value;
    }
  }
  return vario;
}

void check_columns(const Matrix& x) {
  if (x.cols() < 2) {
    throw DataError("need at least two variables");
  }
}

}  // namespace

Matrix emp_vario_m(const Matrix& x, int m, const EstimatorConfig& cfg) {
  check_columns(x);
  if (m < 0 || m >= x.cols()) {
    throw DataError("root index out of range");
  }
  const int k = cfg.k_for(static_cast<int>(x.rows()));
  if (k < 2) {
    throw ConfigError("emp_vario needs at least two exceedances; lower p or "
                      "provide more data");
  }
  return vario_m_on_pareto(rank_pareto_transform(x), m, k);
}

Matrix emp_vario_joint(const Matrix& x, const EstimatorConfig& cfg) {
  check_columns(x);
  const int k = cfg.k_for(static_cast<int>(x.rows()));
  if (k < 2) {
    throw ConfigError("emp_vario needs at least two exceedances; lower p or "
                      "provide more data");
  }
  const Matrix pareto = rank_pareto_transform(x);
  const auto d = x.cols();
  Matrix sum = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    sum += vario_m_on_pareto(pareto, static_cast<int>(m), k);
  }
  return sum / static_cast<double>(d);
}

Matrix emp_chi(const Matrix& x, const EstimatorConfig& cfg) {
  check_columns(x);
  const int n = static_cast<int>(x.rows());
  const int k = cfg.k_for(n);
  const Matrix pareto = rank_pareto_transform(x);
  const auto d = x.cols();

  std::vector<std::vector<char>> exceed(d, std::vector<char>(n, 0));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (int t : top_k_rows(pareto, static_cast<int>(j), k)) {
      exceed[j][t] = 1;
    }
  }
  Matrix chi = Matrix::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      int both = 0;
      for (int t = 0; t < n; ++t) both += exceed[i][t] && exceed[j][t];
      const double value = static_cast<double>(both) / k;
      chi(i, j) = value;
      chi(j, i) = value;
    }
  }
  return chi;
}

EvalScore evaluate_loglik(const FittedModel& model, const Matrix& x_test,
                          const EstimatorConfig& cfg) {
  if (model.gamma.rows() != x_test.cols()) {
    throw DataError("model dimension (" + std::to_string(model.gamma.rows()) +
                    ") does not match test data (" +
                    std::to_string(x_test.cols()) + " columns)");
  }
  const Matrix gamma_test = emp_vario_joint(x_test, cfg);
  EvalScore result;
  result.score = surrogate_loglik(model.theta, gamma_test);
  if (is_valid_variogram(gamma_test)) {
    const Matrix theta_sat = gamma_to_theta(gamma_test);
    result.score -= surrogate_loglik(theta_sat, gamma_test);
    result.relative = true;
  } else {
    result.relative = false;
  }
  return result;
}

}  // namespace xgraph
