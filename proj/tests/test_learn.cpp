#include "xgraph/learn.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "xgraph/errors.hpp"
#include "xgraph/rng.hpp"
#include "xgraph/simulate.hpp"

using namespace xgraph;

namespace {

UndirectedGraph five_node_graph() {
  UndirectedGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  return g;
}

Matrix block_graph_full() {
  Matrix g(6, 6);
  g << 0, 6, 6, 12, 10, 22,
       6, 0, 4, 10, 8, 20,
       6, 4, 0, 6, 4, 16,
       12, 10, 6, 0, 10, 10,
       10, 8, 4, 10, 0, 20,
       22, 20, 16, 10, 20, 0;
  return g;
}

}  // namespace

TEST_CASE("lasso coordinate descent against the soft-threshold formula") {
  // Orthogonal design: each coefficient is a closed-form soft threshold.
  const int k = 4;
  Matrix design = Matrix::Zero(k, 2);
  design(0, 0) = design(1, 0) = 2.0;
  design(2, 1) = design(3, 1) = 1.0;
  Vector response(k);
  response << 2.0, 0.0, 3.0, 1.0;
  const double rho = 0.4;
  const Vector beta = lasso_cd(design, response, rho);
  // z_j = X_j'y / k, v_j = |X_j|^2 / k, beta_j = S(z_j, rho) / v_j.
  const double z0 = 4.0 / 4.0;
  const double v0 = 8.0 / 4.0;
  const double z1 = 4.0 / 4.0;
  const double v1 = 2.0 / 4.0;
  CHECK(beta[0] == doctest::Approx((z0 - rho) / v0).epsilon(1e-9));
  CHECK(beta[1] == doctest::Approx((z1 - rho) / v1).epsilon(1e-9));

  // Penalty large enough to kill everything.
  const Vector zero = lasso_cd(design, response, 10.0);
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("emst recovers a simulated tree") {
  Rng rng(61);
  const UndirectedGraph tree = oracle::random_tree(8, rng);
  Matrix entries = Matrix::Constant(8, 8, std::nan(""));
  entries.diagonal().setZero();
  for (const auto& [i, j] : tree.edges()) {
    const double v = 0.5 + 1.5 * rng.uniform01();
    entries(i, j) = entries(j, i) = v;
  }
  const Matrix gamma = complete_tree_blockgraph(PartialVariogram(tree,
                                                                 entries));
  const Matrix draws = sample_hr_pareto(gamma, 50000, 67);
  EstimatorConfig cfg{0.95};

  const LearnResult by_vario = emst(draws, cfg, EmstWeight::variogram);
  CHECK(by_vario.graph.edges() == tree.edges());
  CHECK(by_vario.connected);
  CHECK(by_vario.graph.num_edges() == 7);

  const LearnResult by_chi = emst(draws, cfg, EmstWeight::chi);
  CHECK(by_chi.graph.edges() == tree.edges());
}

TEST_CASE("emst on two variables returns the only edge") {
  Matrix gamma(2, 2);
  gamma << 0.0, 1.0, 1.0, 0.0;
  const Matrix draws = sample_hr_pareto(gamma, 2000, 71);
  EstimatorConfig cfg{0.9};
  const LearnResult result = emst(draws, cfg, EmstWeight::variogram);
  CHECK(result.graph.has_edge(0, 1));
  CHECK(result.graph.num_edges() == 1);
}

TEST_CASE("emst is invariant under monotone transforms and permutations") {
  Rng rng(73);
  Matrix x(2000, 4);
  for (int i = 0; i < 2000; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = rng.normal() + 0.8 * x(i, 0);
  }
  EstimatorConfig cfg{0.9};
  const LearnResult base = emst(x, cfg, EmstWeight::variogram);

  Matrix warped = x;
  for (int i = 0; i < 2000; ++i) {
    warped(i, 1) = std::exp(x(i, 1));
    warped(i, 3) = std::atan(x(i, 3));
  }
  CHECK(emst(warped, cfg, EmstWeight::variogram).graph.edges() ==
        base.graph.edges());

  const Matrix reversed = x.colwise().reverse();
  CHECK(emst(reversed, cfg, EmstWeight::variogram).graph.edges() ==
        base.graph.edges());
}

TEST_CASE("eglearn penalty extremes") {
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.0));
  const Matrix draws = sample_hr_pareto(gamma, 20000, 79);
  EstimatorConfig cfg{0.95};

  // Unpenalized regressions select essentially everything.
  const LearnResult dense = eglearn(draws, cfg, 0.0);
  CHECK(dense.graph.num_edges() == 10);

  // Full shrinkage empties the edge set and disconnects the graph.
  const LearnResult empty = eglearn(draws, cfg, 100.0);
  CHECK(empty.graph.num_edges() == 0);
  CHECK_FALSE(empty.connected);

  CHECK_THROWS_AS(eglearn(draws, cfg, -0.1), ConfigError);
}

TEST_CASE("eglearn recovers the five-node graph at some penalty") {
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.0));
  const Matrix draws = sample_hr_pareto(gamma, 100000, 83);
  EstimatorConfig cfg{0.95};
  bool exact = false;
  for (double rho : {0.01, 0.02, 0.03, 0.05, 0.08, 0.10, 0.13, 0.17, 0.22,
                     0.30}) {
    const LearnResult result = eglearn(draws, cfg, rho);
    if (result.graph.edges() == truth.edges()) {
      exact = true;
      break;
    }
  }
  CHECK(exact);
}

TEST_CASE("eglearn edge sets shrink along the penalty path") {
  // Lasso paths are only near-monotone; require 95 percent of adjacent grid
  // pairs to be nested.
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.0));
  EstimatorConfig cfg{0.95};
  int nested = 0;
  int total = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix draws = sample_hr_pareto(gamma, 50000, 500 + rep);
    std::set<Edge> previous;
    bool first = true;
    for (double rho : {0.01, 0.02, 0.03, 0.05, 0.08, 0.10, 0.13, 0.17, 0.22,
                       0.30}) {
      const LearnResult result = eglearn(draws, cfg, rho);
      if (!first) {
        ++total;
        nested += std::includes(previous.begin(), previous.end(),
                                result.graph.edges().begin(),
                                result.graph.edges().end());
      }
      previous = result.graph.edges();
      first = false;
    }
  }
  CHECK(nested >= static_cast<int>(0.95 * total));
}

TEST_CASE("emtp2 on two variables leaves the input untouched") {
  Matrix gamma(2, 2);
  gamma << 0.0, 2.0, 2.0, 0.0;
  const FittedModel fit = emtp2_fit(gamma);
  Matrix expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK((fit.theta - expected).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(fit.gamma(0, 1) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("emtp2 constraint is inactive on a tree-metric input") {
  const Matrix block = block_graph_full();
  const FittedModel fit = emtp2_fit(block);
  // Fitted variogram reproduces the input: no constraint is binding.
  CHECK((fit.gamma - block).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(check_metric_property(fit.gamma).ok);
}

TEST_CASE("emtp2 output satisfies the precision and sign invariants") {
  Rng rng(89);
  EstimatorConfig cfg{0.95};
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.5));
  const Matrix draws = sample_hr_pareto(gamma, 50000, 91);
  const Matrix gamma_hat = emp_vario_joint(draws, cfg);

  const FittedModel fit = emtp2_fit(gamma_hat);
  CHECK(is_valid_precision(fit.theta));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j) CHECK(fit.theta(i, j) <= 1e-9);
    }
  }
  CHECK(check_metric_property(fit.gamma).ok);
  // Complementary slackness: the fit matches the data on selected edges.
  for (const auto& [i, j] : fit.graph.edges()) {
    CHECK(fit.gamma(i, j) == doctest::Approx(gamma_hat(i, j)).epsilon(1e-6));
  }
  // And dominates it off the support.
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      if (!fit.graph.has_edge(i, j)) {
        CHECK(fit.gamma(i, j) <= gamma_hat(i, j) + 1e-6);
      }
    }
  }
}

TEST_CASE("emtp2 recovers a supergraph of an EMTP2 model") {
  EstimatorConfig cfg{0.95};
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.5));
  const Matrix draws = sample_hr_pareto(gamma, 100000, 93);
  const FittedModel fit = emtp2_fit(emp_vario_joint(draws, cfg));
  for (const auto& [i, j] : truth.edges()) {
    CHECK(fit.graph.has_edge(i, j));
  }
}

TEST_CASE("emtp2 input validation") {
  Matrix with_zero(3, 3);
  with_zero << 0, 1, 0,
               1, 0, 1,
               0, 1, 0;
  CHECK_THROWS_AS(emtp2_fit(with_zero), DataError);
  CHECK_THROWS_AS(emtp2_fit(Matrix::Ones(3, 3)), DataError);  // diagonal
}

TEST_CASE("parameter shift with no penalty inverts exactly") {
  Rng rng(97);
  const Matrix gamma = oracle::random_variogram(4, rng);
  const Matrix theta = gamma_to_theta(gamma);
  const ShiftFit fit = parameter_shift_fit(gamma, 0.0, 0.25);
  CHECK((fit.theta - theta).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(fit.valid_hr);
  // Theta* = Theta + c 11'.
  const Matrix star = theta + 0.25 * Matrix::Ones(4, 4);
  CHECK((fit.theta_star - star).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("parameter shift penalty extremes and validation") {
  Rng rng(101);
  const Matrix gamma = oracle::random_variogram(4, rng);
  const ShiftFit sparse = parameter_shift_fit(gamma, 50.0, 0.25);
  CHECK(sparse.result.graph.num_edges() == 0);
  CHECK_FALSE(sparse.result.connected);

  CHECK_THROWS_AS(parameter_shift_fit(gamma, -1.0, 0.25), ConfigError);
  CHECK_THROWS_AS(parameter_shift_fit(gamma, 0.1, 0.0), ConfigError);

  // A symmetric zero-diagonal matrix whose shifted covariance is indefinite.
  Matrix bad(3, 3);
  bad << 0, -5, 1,
         -5, 0, 1,
         1, 1, 0;
  CHECK_THROWS_AS(parameter_shift_fit(bad, 0.1, 1.0 / 3), DataError);
}

TEST_CASE("parameter shift recovers the support at some penalty") {
  const UndirectedGraph truth = five_node_graph();
  const Matrix gamma =
      oracle::variogram_on_graph(truth, std::vector<double>(6, 1.0));
  const Matrix draws = sample_hr_pareto(gamma, 100000, 103);
  EstimatorConfig cfg{0.95};
  const Matrix gamma_hat = emp_vario_joint(draws, cfg);
  bool exact = false;
  for (double lam : {0.001, 0.002, 0.004, 0.007, 0.012, 0.02, 0.035, 0.06,
                     0.1, 0.17}) {
    const ShiftFit fit = parameter_shift_fit(gamma_hat, lam, 0.2);
    if (fit.result.graph.edges() == truth.edges()) {
      exact = true;
      break;
    }
  }
  CHECK(exact);
}

TEST_CASE("extremal graphical lasso objective evaluator") {
  Matrix theta(2, 2);
  theta << 0.5, -0.5, -0.5, 0.5;
  Matrix gbar(2, 2);
  gbar << 0.0, 2.0, 2.0, 0.0;
  // -loglik = 1; off-diagonal L1 norm = 1.
  CHECK(eglasso_objective(theta, gbar, 0.3) ==
        doctest::Approx(1.0 + 0.3).epsilon(1e-12));
}
