#pragma once

#include <Eigen/Dense>

namespace xgraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative eigenvalue cutoff used to decide numerical rank. Robust for
// dense symmetric problems up to a few hundred dimensions in double
// precision.
inline constexpr double kEigenTol = 1e-9;

// Spectral decomposition of a symmetric matrix, eigenvalues sorted in
// descending order, eigenvectors as orthonormal columns in matching order.
struct EigenSym {
  Vector values;
  Matrix vectors;

  Matrix reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
  }
};

// Throws DataError if M is not square or departs from symmetry by more
// than round-off slack. Inputs within slack are symmetrized as (M+M')/2
// before decomposition.
EigenSym eigen_sym(const Matrix& m);

Matrix symmetrize(const Matrix& m);

// Moore-Penrose pseudo-inverse of a symmetric matrix. Eigenvalues with
// |lambda| <= tol * max|lambda| are treated as zero.
Matrix pseudo_inverse(const Matrix& m, double tol = kEigenTol);

// Product of the eigenvalues exceeding tol * max eigenvalue. Requires a
// symmetric positive semidefinite input with at least one nonzero
// eigenvalue; throws DataError otherwise.
double pseudo_determinant(const Matrix& m, double tol = kEigenTol);

// log of pseudo_determinant, computed as a sum of logs.
double log_pseudo_determinant(const Matrix& m, double tol = kEigenTol);

// P M P with P = I - 11'/d, the projection onto the orthogonal complement
// of the all-ones vector. Output rows and columns sum to zero.
Matrix center_project(const Matrix& m);

}  // namespace xgraph
