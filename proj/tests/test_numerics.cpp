#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "invkit/errors.hpp"
#include "invkit/numerics.hpp"
#include "invkit/rng.hpp"

using namespace invkit;

namespace {

Matrix random_symmetric(std::size_t n, Rng& rng) {
  Matrix M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) M(i, j) = M(j, i) = rng.gaussian();
  return M;
}

Matrix random_square(std::size_t n, Rng& rng) {
  Matrix M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = rng.gaussian();
  return M;
}

double reconstruction_error(const Matrix& M, const SymEig& e) {
  const std::size_t n = M.rows();
  Matrix R(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.U(i, k) * e.eigenvalues[k] * e.U(j, k);
      R(i, j) = s - M(i, j);
    }
  return R.max_abs();
}

}  // namespace

TEST_CASE("sym_eig matches the 2x2 closed form") {
  // [[2,1],[1,2]] has eigenpairs (3, (1,1)/sqrt2) and (1, (1,-1)/sqrt2).
  const Matrix M = Matrix::from_rows({{2, 1}, {1, 2}});
  const SymEig e = sym_eig(M);
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::fabs(e.U(0, 0) - s) < 1e-12);
  CHECK(std::fabs(e.U(1, 0) - s) < 1e-12);
  CHECK(std::fabs(std::fabs(e.U(0, 1)) - s) < 1e-12);
}

TEST_CASE("sym_eig orders eigenvalues descending and reconstructs") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    const Matrix M = random_symmetric(n, rng);
    const SymEig e = sym_eig(M);
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i + 1]);
    const double scale = 1.0 + M.frobenius_norm();
    CHECK(reconstruction_error(M, e) <= 10.0 * 1e-10 * scale);
    // Orthonormal columns.
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const double g = dot(e.U.col(a), e.U.col(b));
        CHECK(std::fabs(g - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("sym_eig is bitwise deterministic") {
  Rng rng(7);
  const Matrix M = random_symmetric(5, rng);
  const SymEig a = sym_eig(M);
  const SymEig b = sym_eig(M);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.U == b.U);
}

TEST_CASE("sym_eig rejects nonsymmetric input") {
  const Matrix M = Matrix::from_rows({{1, 2}, {0, 1}});
  CHECK_THROWS_AS(sym_eig(M), NotSymmetricError);
}

TEST_CASE("inertia of a diagonal matrix counts signs") {
  const Matrix M = Matrix::from_rows({{2, 0, 0}, {0, 0, 0}, {0, 0, -3}});
  const Inertia in = inertia(M, 1e-10);
  CHECK(in.positive == 1);
  CHECK(in.zero == 1);
  CHECK(in.negative == 1);
}

TEST_CASE("inertia is invariant under congruence") {
  // Sylvester: inertia(B^T M B) = inertia(M) for invertible B.
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix M = Matrix::from_rows({{1, 0, 0}, {0, -2, 0}, {0, 0, 3}});
    Matrix B = random_square(3, rng);
    B = B + Matrix::identity(3) * 4.0;  // keep it comfortably nonsingular
    const Matrix C = B.transposed() * (M * B);
    const Inertia got = inertia(C, 1e-8);
    CHECK(got.positive == 2);
    CHECK(got.zero == 0);
    CHECK(got.negative == 1);
  }
}

TEST_CASE("definiteness tests the negative side first") {
  // With psd_tol = 0 the band collapses and 0 must classify NegSemidefinite.
  Tolerances tol;
  tol.psd_tol = 0.0;
  CHECK(definiteness_of(0.0, 0.0, tol) == Definiteness::NegSemidefinite);
  CHECK(definiteness_of(1e-30, 1.0, tol) == Definiteness::NotNegSemidefinite);

  Tolerances dflt;  // psd_tol 1e-8
  CHECK(definiteness_of(-1.0, 1.0, dflt) == Definiteness::NegSemidefinite);
  CHECK(definiteness_of(1e-12, 1.0, dflt) == Definiteness::Marginal);
  CHECK(definiteness_of(1.0, 1.0, dflt) == Definiteness::NotNegSemidefinite);
}

TEST_CASE("definiteness of matrices") {
  CHECK(definiteness(Matrix::from_rows({{-1, 0}, {0, -2}})) == Definiteness::NegSemidefinite);
  CHECK(definiteness(Matrix::from_rows({{1, 0}, {0, -2}})) == Definiteness::NotNegSemidefinite);
}

TEST_CASE("invert matches hand inverses and round-trips") {
  const Matrix A = Matrix::from_rows({{2, 1}, {1, 1}});
  const Matrix Ainv = invert(A);
  // det = 1; inverse = [[1,-1],[-1,2]].
  CHECK(std::fabs(Ainv(0, 0) - 1.0) < 1e-12);
  CHECK(std::fabs(Ainv(0, 1) + 1.0) < 1e-12);
  CHECK(std::fabs(Ainv(1, 0) + 1.0) < 1e-12);
  CHECK(std::fabs(Ainv(1, 1) - 2.0) < 1e-12);

  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix M = random_square(4, rng) + Matrix::identity(4) * 5.0;
    const Matrix R = M * invert(M) - Matrix::identity(4);
    CHECK(R.max_abs() < 1e-10);
  }
}

TEST_CASE("invert rejects singular matrices") {
  const Matrix S = Matrix::from_rows({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(invert(S), SingularError);
}

TEST_CASE("mat_exp closed forms") {
  // Diagonal: exp(diag(a,b) t) = diag(e^{at}, e^{bt}).
  const Matrix D = Matrix::from_rows({{1, 0}, {0, -2}});
  const Matrix E = mat_exp(D, 0.5);
  CHECK(E(0, 0) == doctest::Approx(std::exp(0.5)).epsilon(1e-13));
  CHECK(E(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(std::fabs(E(0, 1)) < 1e-15);

  // Rotation generator: exp(t [[0,-1],[1,0]]) = [[cos t, -sin t],[sin t, cos t]].
  const Matrix R = Matrix::from_rows({{0, -1}, {1, 0}});
  const double t = 1.2345;
  const Matrix Er = mat_exp(R, t);
  CHECK(Er(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-13));
  CHECK(Er(0, 1) == doctest::Approx(-std::sin(t)).epsilon(1e-13));
  CHECK(Er(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-13));

  // Nilpotent: exp(t [[0,1],[0,0]]) = [[1,t],[0,1]] exactly.
  const Matrix N = Matrix::from_rows({{0, 1}, {0, 0}});
  const Matrix En = mat_exp(N, 3.0);
  CHECK(En(0, 0) == 1.0);
  CHECK(En(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(En(1, 0) == 0.0);
}

TEST_CASE("mat_exp satisfies the semigroup property") {
  Rng rng(99);
  const Matrix A = random_square(3, rng);
  const Matrix Est = mat_exp(A, 0.7 + 0.4);
  const Matrix Es = mat_exp(A, 0.7);
  const Matrix Et = mat_exp(A, 0.4);
  const Matrix R = Es * Et - Est;
  CHECK(R.max_abs() < 1e-10 * (1.0 + Est.max_abs()));
}

TEST_CASE("mat_exp overflows loudly on divergent scales") {
  const Matrix A = Matrix::from_rows({{400.0}});
  CHECK_THROWS_AS(mat_exp(A, 2.0), OverflowError);
}
