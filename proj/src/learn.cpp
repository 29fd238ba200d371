#include "xgraph/learn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xgraph/errors.hpp"

namespace xgraph {

namespace {

void require_vario_like(const Matrix& g, const char* what) {
  if (g.rows() != g.cols() || g.rows() < 2) {
    throw DataError(std::string(what) + " must be square with dimension >= 2");
  }
  const double scale = 1.0 + g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw DataError(std::string(what) + " must be symmetric");
  }
  if (g.diagonal().cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DataError(std::string(what) + " must have zero diagonal");
  }
}

bool graph_is_connected(const UndirectedGraph& g) { return g.is_connected(); }

}  // namespace

LearnResult emst(const Matrix& x, const EstimatorConfig& cfg,
                 EmstWeight weight_kind) {
  const auto d = x.cols();
  Matrix weights;
  if (weight_kind == EmstWeight::variogram) {
    weights = emp_vario_joint(x, cfg);
  } else {
    const Matrix chi = emp_chi(x, cfg);
    weights = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (i != j) {
          weights(i, j) = -std::log(chi(i, j));  // +inf when chi == 0
        }
      }
    }
  }
  std::vector<WeightedEdge> edges;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::isfinite(weights(i, j))) {
        edges.push_back({static_cast<int>(i), static_cast<int>(j),
                         weights(i, j)});
      }
    }
  }
  UndirectedGraph tree = minimum_spanning_tree(edges, static_cast<int>(d));
  return LearnResult{std::move(tree), std::move(weights), 0.0, true, {}};
}

Vector lasso_cd(const Matrix& design, const Vector& response, double rho,
                double tol, int max_iter) {
  const auto k = design.rows();
  const auto q = design.cols();
  if (response.size() != k) {
    throw DataError("design and response dimensions do not match");
  }
  if (rho < 0) {
    throw ConfigError("lasso penalty must be nonnegative");
  }
  const double kd = static_cast<double>(k);
  const Vector col_ms = design.colwise().squaredNorm() / kd;

  Vector beta = Vector::Zero(q);
  Vector residual = response;
  const auto primal = [&]() {
    return 0.5 * residual.squaredNorm() / kd + rho * beta.lpNorm<1>();
  };

  for (int pass = 0; pass < max_iter; ++pass) {
    for (Eigen::Index j = 0; j < q; ++j) {
      if (col_ms[j] <= 0) continue;
      const double old = beta[j];
      const double z = design.col(j).dot(residual) / kd + col_ms[j] * old;
      double updated = 0.0;
      if (z > rho) {
        updated = (z - rho) / col_ms[j];
      } else if (z < -rho) {
        updated = (z + rho) / col_ms[j];
      }
      if (updated != old) {
        residual.noalias() -= (updated - old) * design.col(j);
        beta[j] = updated;
      }
    }
    // Duality gap with the scaled residual as the dual point.
    const double grad_inf = (design.transpose() * residual).cwiseAbs()
                                .maxCoeff() / kd;
    if (rho > 0) {
      const double s = grad_inf > rho ? rho / grad_inf : 1.0;
      const Vector nu = (s / kd) * residual;
      const double dual = 0.5 * response.squaredNorm() / kd -
                          0.5 * kd * (nu - response / kd).squaredNorm();
      if (primal() - dual <= tol) return beta;
    } else if (grad_inf <= tol) {
      return beta;
    }
  }
  throw ConvergenceError("lasso coordinate descent did not reach the duality "
                         "gap tolerance");
}

LearnResult eglearn(const Matrix& x, const EstimatorConfig& cfg, double rho) {
  if (rho < 0) {
    throw ConfigError("eglearn penalty must be nonnegative");
  }
  const int d = static_cast<int>(x.cols());
  if (d < 3) {
    throw DataError("eglearn needs at least three variables");
  }
  const int n = static_cast<int>(x.rows());
  const int k = cfg.k_for(n);
  if (k < 2) {
    throw ConfigError("eglearn needs at least two exceedances");
  }
  const Matrix pareto = rank_pareto_transform(x);

  std::vector<std::string> warnings;
  if (k < d) {
    warnings.push_back("fewer exceedances than variables; node-wise "
                       "regressions are ill-posed and ridge-regularized");
  }

  Matrix votes = Matrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    const std::vector<int> rows = top_k_rows(pareto, m, k);
    // Centered log-increments relative to the root.
    Matrix incr(k, d - 1);
    std::vector<int> node_of(d - 1);
    for (int j = 0, c = 0; j < d; ++j) {
      if (j == m) continue;
      node_of[c] = j;
      for (int t = 0; t < k; ++t) {
        incr(t, c) = std::log(pareto(rows[t], j)) -
                     std::log(pareto(rows[t], m));
      }
      ++c;
    }
    incr.rowwise() -= incr.colwise().mean();

    // Node-wise selection with the OR rule inside this root.
    Matrix selected = Matrix::Zero(d, d);
    Matrix design(k, d - 2);
    for (int resp = 0; resp < d - 1; ++resp) {
      for (int c = 0, dc = 0; c < d - 1; ++c) {
        if (c == resp) continue;
        design.col(dc++) = incr.col(c);
      }
      Vector beta;
      if (rho > 0) {
        beta = lasso_cd(design, incr.col(resp), rho);
      } else {
        // Unpenalized fall-back, regularized for rank-deficient designs.
        const Matrix gram = design.transpose() * design +
                            1e-8 * Matrix::Identity(d - 2, d - 2);
        beta = gram.ldlt().solve(design.transpose() * incr.col(resp));
      }
      for (int c = 0, dc = 0; c < d - 1; ++c) {
        if (c == resp) continue;
        if (beta[dc++] != 0.0) {
          const int i = node_of[resp];
          const int j = node_of[c];
          selected(i, j) = 1.0;
          selected(j, i) = 1.0;
        }
      }
    }
    votes += selected;
  }

  UndirectedGraph graph(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      // Strict majority of the d-2 roots that exclude both endpoints.
      if (votes(i, j) > 0.5 * (d - 2)) graph.add_edge(i, j);
    }
  }
  const bool connected = graph_is_connected(graph);
  return LearnResult{std::move(graph), std::move(votes), rho, connected,
                     std::move(warnings)};
}

namespace {

double laplacian_resistance(const Matrix& sigma, int i, int j) {
  return sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
}

}  // namespace

FittedModel emtp2_fit(const Matrix& gamma_hat, const Emtp2Options& options) {
  require_vario_like(gamma_hat, "variogram estimate");
  const int d = static_cast<int>(gamma_hat.rows());
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!(gamma_hat(i, j) > 0) || !std::isfinite(gamma_hat(i, j))) {
        throw DataError("variogram estimate entries must be positive");
      }
    }
  }

  // Work in the Laplacian parameterization Theta = sum_e w_e L_e, w_e >= 0.
  // The gradient of the surrogate likelihood in w_e is Gamma(Theta)_e -
  // GammaHat_e with Gamma(Theta) the effective resistance, so each
  // coordinate step solves its KKT condition exactly.
  Matrix w = gamma_hat;  // weights of the initial complete-graph Laplacian
  Matrix theta = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j) {
        theta(i, j) = -w(i, j);
        theta(i, i) += w(i, j);
      }
    }
  }
  // Scale so that the implied covariance trace matches the centered input.
  {
    const double trace_target = center_project(-0.5 * gamma_hat).trace();
    const double trace_init = pseudo_inverse(theta).trace();
    const double s = trace_target > 0 ? trace_init / trace_target : 1.0;
    theta *= s;
    w *= s;
  }
  Matrix sigma = pseudo_inverse(theta);

  int sweep = 0;
  for (; sweep < options.max_iter; ++sweep) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double g = laplacian_resistance(sigma, i, j);
        if (!(g > 0) || !std::isfinite(g)) {
          throw ConvergenceError("EMTP2 iterate left the feasible cone");
        }
        double t = 1.0 / gamma_hat(i, j) - 1.0 / g;
        t = std::max(t, -w(i, j));
        if (std::abs(t) <= 1e-16 * (1.0 + w(i, j))) continue;
        const double denom = 1.0 + t * g;
        if (!(denom > 0)) {
          throw ConvergenceError("EMTP2 update would lose rank");
        }
        const Vector su = sigma.col(i) - sigma.col(j);
        sigma.noalias() -= (t / denom) * su * su.transpose();
        w(i, j) += t;
        w(j, i) = w(i, j);
        theta(i, i) += t;
        theta(j, j) += t;
        theta(i, j) -= t;
        theta(j, i) -= t;
      }
    }
    if ((sweep + 1) % 64 == 0) {
      sigma = pseudo_inverse(theta);
    }
    // KKT residual: fitted variogram equals the input on active pairs and
    // does not exceed it on inactive ones.
    double residual = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double g = laplacian_resistance(sigma, i, j);
        if (w(i, j) > 0) {
          residual = std::max(residual, std::abs(g - gamma_hat(i, j)));
        } else {
          residual = std::max(residual, g - gamma_hat(i, j));
        }
      }
    }
    if (residual < options.kkt_tol) {
      sigma = pseudo_inverse(theta);  // discard accumulated rank-one drift
      double verify = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          const double g = laplacian_resistance(sigma, i, j);
          verify = std::max(verify, w(i, j) > 0
                                        ? std::abs(g - gamma_hat(i, j))
                                        : g - gamma_hat(i, j));
        }
      }
      if (verify < options.kkt_tol) break;
    }
  }
  if (sweep == options.max_iter) {
    throw ConvergenceError("EMTP2 solver did not reach KKT residual " +
                           std::to_string(options.kkt_tol) + " within " +
                           std::to_string(options.max_iter) + " sweeps");
  }

  // Support with a scale-aware cutoff; inactive weights are exact zeros of
  // the coordinate updates, so the cutoff only absorbs round-off.
  const double w_max = w.cwiseAbs().maxCoeff();
  UndirectedGraph graph(d);
  Matrix theta_clean = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (w(i, j) > 1e-6 * w_max) {
        graph.add_edge(i, j);
        theta_clean(i, j) = theta_clean(j, i) = -w(i, j);
        theta_clean(i, i) += w(i, j);
        theta_clean(j, j) += w(i, j);
      }
    }
  }
  return FittedModel{std::move(graph), theta_to_gamma(theta_clean),
                     theta_clean, std::nullopt, "emtp2", 0.0};
}

ShiftFit parameter_shift_fit(const Matrix& gamma_hat, double lambda, double c,
                             const ShiftFitOptions& options) {
  require_vario_like(gamma_hat, "variogram estimate");
  if (!(c > 0)) {
    throw ConfigError("shift constant c must be positive");
  }
  if (lambda < 0) {
    throw ConfigError("shift penalty must be nonnegative");
  }
  const int d = static_cast<int>(gamma_hat.rows());

  // Sigma* = Theta^+ + 11'/(c d^2) with Theta^+ = P(-Gamma/2)P.
  Matrix sigma_star = center_project(-0.5 * gamma_hat);
  sigma_star.array() += 1.0 / (c * d * d);
  Eigen::LLT<Matrix> llt(sigma_star);
  if (llt.info() != Eigen::Success) {
    throw DataError("shifted covariance built from the variogram estimate is "
                    "not positive definite");
  }

  Matrix omega = llt.solve(Matrix::Identity(d, d));  // Theta* start / lambda=0
  omega = symmetrize(omega);

  if (lambda > 0) {
    // Proximal gradient with backtracking on
    //   f(T) = -log det T + tr(T Sigma*),  g(T) = lambda sum_offdiag |T - c|.
    const double res_tol = options.tol * std::max(1.0,
                                                  sigma_star.cwiseAbs()
                                                      .maxCoeff());
    auto logdet = [](const Eigen::LLT<Matrix>& chol) {
      return 2.0 * chol.matrixL().toDenseMatrix().diagonal().array().log()
                 .sum();
    };
    double step = 1.0;
    Eigen::LLT<Matrix> chol(omega);
    double fval = -logdet(chol) + omega.cwiseProduct(sigma_star).sum();

    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
      const Matrix inv = symmetrize(chol.solve(Matrix::Identity(d, d)));
      const Matrix grad = sigma_star - inv;

      // Subgradient optimality residual.
      double residual = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j) {
            residual = std::max(residual, std::abs(grad(i, j)));
          } else if (omega(i, j) != c) {
            residual = std::max(residual, std::abs(grad(i, j) +
                                                   lambda * (omega(i, j) > c
                                                                 ? 1.0
                                                                 : -1.0)));
          } else {
            residual = std::max(residual, std::abs(grad(i, j)) - lambda);
          }
        }
      }
      if (residual <= res_tol) break;

      bool stepped = false;
      for (int half = 0; half < 60; ++half) {
        Matrix cand = omega - step * grad;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const double z = cand(i, j) - c;
            const double thr = step * lambda;
            cand(i, j) = c + (z > thr ? z - thr : (z < -thr ? z + thr : 0.0));
          }
        }
        cand = symmetrize(cand);
        Eigen::LLT<Matrix> cand_chol(cand);
        if (cand_chol.info() == Eigen::Success) {
          const double cand_f = -logdet(cand_chol) +
                                cand.cwiseProduct(sigma_star).sum();
          const Matrix diff = cand - omega;
          const double quad = fval + grad.cwiseProduct(diff).sum() +
                              diff.squaredNorm() / (2.0 * step);
          if (cand_f <= quad + 1e-12 * std::abs(quad)) {
            omega = std::move(cand);
            chol = std::move(cand_chol);
            fval = cand_f;
            stepped = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!stepped) {
        throw ConvergenceError("parameter shift line search failed");
      }
      step *= 1.25;
    }
    if (iter == options.max_iter) {
      throw ConvergenceError("parameter shift solver did not converge");
    }
  }

  Matrix theta = omega;
  theta.array() -= c;
  theta = symmetrize(theta);

  double max_off = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j) max_off = std::max(max_off, std::abs(theta(i, j)));
    }
  }
  UndirectedGraph graph(d);
  Matrix scores = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      scores(i, j) = scores(j, i) = std::abs(theta(i, j));
      if (std::abs(theta(i, j)) > 1e-6 * max_off) graph.add_edge(i, j);
    }
  }
  const bool connected = graph.is_connected();
  ShiftFit fit{LearnResult{std::move(graph), std::move(scores), lambda,
                           connected, {}},
               theta, omega, is_valid_precision(theta)};
  return fit;
}

double eglasso_objective(const Matrix& theta, const Matrix& gbar,
                         double lambda) {
  double l1_off = 0.0;
  for (Eigen::Index i = 0; i < theta.rows(); ++i) {
    for (Eigen::Index j = 0; j < theta.cols(); ++j) {
      if (i != j) l1_off += std::abs(theta(i, j));
    }
  }
  return -surrogate_loglik(theta, gbar) + lambda * l1_off;
}

}  // namespace xgraph
