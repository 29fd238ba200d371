#include "xgraph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xgraph/errors.hpp"

namespace xgraph {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DataError("matrix must be square, got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
  if (m.rows() == 0) {
    throw DataError("matrix must be non-empty");
  }
}

}  // namespace

Matrix symmetrize(const Matrix& m) {
  require_square(m);
  return 0.5 * (m + m.transpose());
}

EigenSym eigen_sym(const Matrix& m) {
  require_square(m);
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    throw DataError("matrix is not symmetric (max asymmetry " +
                    std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) {
    throw DataError("eigendecomposition failed");
  }
  // Eigen returns ascending order; flip to descending.
  EigenSym result;
  result.values = solver.eigenvalues().reverse();
  result.vectors = solver.eigenvectors().rowwise().reverse();
  return result;
}

Matrix pseudo_inverse(const Matrix& m, double tol) {
  if (tol <= 0) {
    throw ConfigError("pseudo_inverse: tol must be positive");
  }
  const EigenSym es = eigen_sym(m);
  const double cutoff = tol * es.values.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values[i]) > cutoff) {
      inv[i] = 1.0 / es.values[i];
    }
  }
  return symmetrize(es.vectors * inv.asDiagonal() * es.vectors.transpose());
}

double pseudo_determinant(const Matrix& m, double tol) {
  return std::exp(log_pseudo_determinant(m, tol));
}

double log_pseudo_determinant(const Matrix& m, double tol) {
  if (tol <= 0) {
    throw ConfigError("pseudo_determinant: tol must be positive");
  }
  const EigenSym es = eigen_sym(m);
  const double cutoff = tol * es.values.cwiseAbs().maxCoeff();
  if (es.values.minCoeff() < -cutoff) {
    throw DataError("pseudo_determinant: matrix is not positive semidefinite "
                    "(min eigenvalue " +
                    std::to_string(es.values.minCoeff()) + ")");
  }
  if (es.values.maxCoeff() <= cutoff) {
    throw DataError(
        "pseudo_determinant: matrix is degenerate (no eigenvalue above "
        "tolerance)");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > cutoff) {
      log_det += std::log(es.values[i]);
    }
  }
  return log_det;
}

Matrix center_project(const Matrix& m) {
  const Matrix sym = symmetrize(m);
  const Vector row_mean = sym.rowwise().mean();
  const double total_mean = row_mean.mean();
  // P M P = M - r 1' - 1 r' + mbar 11', with r the vector of row means.
  Matrix out = sym;
  out.colwise() -= row_mean;
  out.rowwise() -= row_mean.transpose();
  out.array() += total_mean;
  return symmetrize(out);
}

}  // namespace xgraph
