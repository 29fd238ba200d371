// Test-only oracles, independent of the library implementation paths they
// check: quadrature-based normal CDF, closed-form bivariate Husler-Reiss
// quantities, Kolmogorov-Smirnov tests, finite differences, brute-force
// path enumeration, and random model generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "xgraph/graph.hpp"
#include "xgraph/linalg.hpp"
#include "xgraph/rng.hpp"

namespace oracle {

using xgraph::Matrix;
using xgraph::Vector;

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-12, int depth = 60) {
  std::function<double(double, double, double, double, double, double, int)>
      recurse = [&](double lo, double hi, double flo, double fmid, double fhi,
                    double whole, int level) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flmid = f(lmid);
    const double frmid = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    if (level <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return recurse(lo, mid, flo, flmid, fmid, left, level - 1) +
           recurse(mid, hi, fmid, frmid, fhi, right, level - 1);
  };
  const double mid = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(mid);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return recurse(a, b, fa, fm, fb, whole, depth);
}

// Standard normal CDF by quadrature of the density (independent of the
// erfc-based implementation in the library).
inline double normal_cdf(double x) {
  const auto density = [](double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  if (x < -12.0) return 0.0;
  if (x > 12.0) return 1.0;
  if (x >= 0.0) return 0.5 + simpson(density, 0.0, x);
  return 0.5 - simpson(density, x, 0.0);
}

// Closed-form bivariate Husler-Reiss exponent function
//   V(y1, y2) = Phi(s/2 + u/s)/y1 + Phi(s/2 - u/s)/y2,
// with s = sqrt(gamma), u = log(y2/y1).
inline double bivariate_V(double y1, double y2, double gamma) {
  const double s = std::sqrt(gamma);
  const double u = std::log(y2 / y1);
  return normal_cdf(0.5 * s + u / s) / y1 + normal_cdf(0.5 * s - u / s) / y2;
}

// chi = P(W + E > 0) for W ~ N(-gamma/2, gamma), E ~ Exp(1), evaluated by
// one-dimensional quadrature.
inline double chi_quadrature(double gamma) {
  const double s = std::sqrt(gamma);
  const auto integrand = [&](double t) {
    return std::exp(-t) * normal_cdf((t - 0.5 * gamma) / s);
  };
  return simpson(integrand, 0.0, 60.0, 1e-13);
}

// Mixed partial -d^2 V / dy1 dy2 by central differences with one Richardson
// extrapolation step; this is the bivariate exponent measure density.
inline double bivariate_density_fd(double y1, double y2, double gamma) {
  const auto mixed = [&](double h) {
    return -(bivariate_V(y1 + h, y2 + h, gamma) -
             bivariate_V(y1 + h, y2 - h, gamma) -
             bivariate_V(y1 - h, y2 + h, gamma) +
             bivariate_V(y1 - h, y2 - h, gamma)) /
           (4.0 * h * h);
  };
  const double coarse = mixed(1e-3);
  const double fine = mixed(5e-4);
  return (4.0 * fine - coarse) / 3.0;
}

// --- Kolmogorov-Smirnov ----------------------------------------------------

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1}
// exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample KS p-value against a CDF.
inline double ks_test(std::vector<double> sample,
                      const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

// Two-sample KS p-value.
inline double ks_test_two(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

// --- random generators -------------------------------------------------------

// A random strictly valid variogram: the variogram of a random positive
// definite covariance matrix.
inline Matrix random_variogram(int d, xgraph::Rng& rng) {
  Matrix w(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      w(i, j) = rng.normal();
    }
  }
  const Matrix cov =
      w * w.transpose() / d + 0.2 * Matrix::Identity(d, d);
  Matrix gamma(d, d);
  for (int i = 0; i < d; ++i) {
    gamma(i, i) = 0.0;
    for (int j = i + 1; j < d; ++j) {
      const double value = cov(i, i) + cov(j, j) - 2.0 * cov(i, j);
      gamma(i, j) = gamma(j, i) = value;
    }
  }
  return gamma;
}

// Random labeled tree from a Pruefer-style attachment.
inline xgraph::UndirectedGraph random_tree(int d, xgraph::Rng& rng) {
  xgraph::UndirectedGraph tree(d);
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  for (int i = d - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  for (int t = 1; t < d; ++t) {
    tree.add_edge(order[t], order[rng.below(t)]);
  }
  return tree;
}

// Variogram of the Husler-Reiss model whose precision matrix is the
// Laplacian of `graph` with the given positive edge conductances; its
// extremal graph is exactly `graph`.
inline Matrix variogram_on_graph(const xgraph::UndirectedGraph& graph,
                                 const std::vector<double>& conductance) {
  const int d = graph.num_nodes();
  Matrix theta = Matrix::Zero(d, d);
  int e = 0;
  for (const auto& [i, j] : graph.edges()) {
    const double w = conductance[e++];
    theta(i, i) += w;
    theta(j, j) += w;
    theta(i, j) -= w;
    theta(j, i) -= w;
  }
  const Matrix sigma = xgraph::pseudo_inverse(theta);
  Matrix gamma(d, d);
  for (int i = 0; i < d; ++i) {
    gamma(i, i) = 0.0;
    for (int j = i + 1; j < d; ++j) {
      gamma(i, j) = gamma(j, i) =
          sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
    }
  }
  return gamma;
}

// Random DAG: random permutation defines the order, each forward pair is an
// arc with the given probability.
inline xgraph::Dag random_dag(int d, double arc_prob, xgraph::Rng& rng) {
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  for (int i = d - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  xgraph::Dag dag(d);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      if (rng.uniform01() < arc_prob) dag.add_arc(order[a], order[b]);
    }
  }
  return dag;
}

// Brute-force max-product path weight from j to i over all directed paths,
// by exhaustive depth-first enumeration (independent of the library's
// dynamic program).
inline double best_path_product(const xgraph::Dag& dag,
                                const std::map<xgraph::Edge, double>& weight,
                                int from, int to) {
  double best = 0.0;
  std::vector<char> used(dag.num_nodes(), 0);
  std::function<void(int, double)> dfs = [&](int v, double prod) {
    if (v == to) {
      best = std::max(best, prod);
      return;
    }
    for (int w : dag.children(v)) {
      if (used[w]) continue;
      used[w] = 1;
      dfs(w, prod * weight.at({v, w}));
      used[w] = 0;
    }
  };
  used[from] = 1;
  dfs(from, 1.0);
  return best;
}

inline double sample_mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

inline double sample_var(const std::vector<double>& xs) {
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / (xs.size() - 1);
}

}  // namespace oracle
