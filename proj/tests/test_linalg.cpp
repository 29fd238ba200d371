#include "xgraph/linalg.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "xgraph/errors.hpp"
#include "xgraph/rng.hpp"

using namespace xgraph;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("pseudo_inverse on the identity") {
  const Matrix id = Matrix::Identity(3, 3);
  CHECK(max_abs_diff(pseudo_inverse(id, 1e-10), id) < 1e-12);
}

TEST_CASE("pseudo_inverse of a rank-one symmetric matrix") {
  // a * [[1,-1],[-1,1]] has the single nonzero eigenvalue 2a on (1,-1)/sqrt2,
  // so the pseudo-inverse is the projector scaled by 1/(2a), i.e.
  // 1/(4a) * [[1,-1],[-1,1]]. For a = gamma/4 with gamma = 2 the matrix is
  // the projector itself and equals its own pseudo-inverse.
  const double gamma = 2.0;
  const double a = gamma / 4.0;
  Matrix m(2, 2);
  m << a, -a, -a, a;
  Matrix expected(2, 2);
  const double inv = 1.0 / (4.0 * a);
  expected << inv, -inv, -inv, inv;
  const Matrix mp = pseudo_inverse(m);
  CHECK(max_abs_diff(mp, expected) < 1e-12);
  // Penrose identities hold, which pins the scale.
  CHECK(max_abs_diff(m * mp * m, m) < 1e-12);
  CHECK(max_abs_diff(mp * m * mp, mp) < 1e-12);
}

TEST_CASE("pseudo_inverse of the zero matrix") {
  const Matrix zero = Matrix::Zero(2, 2);
  CHECK(max_abs_diff(pseudo_inverse(zero), zero) == 0.0);
}

TEST_CASE("pseudo_inverse rejects bad inputs") {
  CHECK_THROWS_AS(pseudo_inverse(Matrix::Zero(2, 3)), DataError);
  Matrix asym(2, 2);
  asym << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(pseudo_inverse(asym), DataError);
  CHECK_THROWS_AS(pseudo_inverse(Matrix::Identity(2, 2), 0.0), ConfigError);
}

TEST_CASE("Penrose identities on random symmetric matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(6));
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
    }
    m = symmetrize(m);
    const Matrix mp = pseudo_inverse(m);
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(m * mp * m, m) < 1e-8 * scale);
    CHECK(max_abs_diff(mp * m * mp, mp) < 1e-8 * scale);
    // Involution.
    CHECK(max_abs_diff(pseudo_inverse(mp), m) < 1e-7 * scale);
  }
}

TEST_CASE("pseudo_determinant examples") {
  Matrix half(2, 2);
  half << 0.5, -0.5, -0.5, 0.5;
  CHECK(pseudo_determinant(half) == doctest::Approx(1.0).epsilon(1e-12));

  const Matrix p3 = center_project(Matrix::Identity(3, 3));
  CHECK(pseudo_determinant(p3) == doctest::Approx(1.0).epsilon(1e-10));

  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 2.0;
  diag(1, 1) = 3.0;
  CHECK(pseudo_determinant(diag) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("pseudo_determinant error cases") {
  CHECK_THROWS_AS(pseudo_determinant(Matrix::Zero(2, 2)), DataError);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(pseudo_determinant(neg), DataError);
}

TEST_CASE("pseudo_determinant reciprocal under pseudo-inversion") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(5));
    Matrix w(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) w(i, j) = rng.normal();
    }
    const Matrix psd = center_project(w * w.transpose());  // PSD, rank d-1
    const double det = pseudo_determinant(psd);
    const double det_inv = pseudo_determinant(pseudo_inverse(psd));
    CHECK(det * det_inv == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("center_project examples") {
  const Matrix ones = Matrix::Ones(3, 3);
  CHECK(center_project(ones).cwiseAbs().maxCoeff() < 1e-14);

  Matrix expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK(max_abs_diff(center_project(Matrix::Identity(2, 2)), expected) <
        1e-14);
}

TEST_CASE("center_project fixes centered matrices and is idempotent") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(6));
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
    }
    m = symmetrize(m);
    const Matrix once = center_project(m);
    CHECK(once.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    CHECK(once.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_abs_diff(center_project(once), once) < 1e-10);
  }
}

TEST_CASE("eigen_sym reconstructs its input") {
  Rng rng(17);
  const int d = 6;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  }
  m = symmetrize(m);
  const EigenSym es = eigen_sym(m);
  CHECK(max_abs_diff(es.reconstruct(), m) <
        1e-8 * (1.0 + m.cwiseAbs().maxCoeff()));
  for (int i = 0; i + 1 < d; ++i) {
    CHECK(es.values[i] >= es.values[i + 1]);
  }
}
