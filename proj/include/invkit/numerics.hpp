#pragma once

#include <cstddef>

#include "invkit/matrix.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

// Eigendecomposition of a symmetric matrix. eigenvalues sorted descending;
// eigenvectors are the matching columns of U, each sign-normalized so its
// largest-magnitude component is positive. Guarantees, with s = 1 + ||M||_F:
//   ||U^T U - I||_max   <= eig_tol
//   ||M U - U diag(l)||_max <= eig_tol * s
struct SymEig {
  Vector eigenvalues;  // descending
  Matrix U;            // columns are eigenvectors
};

struct Inertia {
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t negative = 0;

  bool operator==(const Inertia&) const = default;
};

enum class Definiteness { NegSemidefinite, Marginal, NotNegSemidefinite };

// Cyclic Jacobi with a fixed row-major sweep order, so results are
// bit-for-bit reproducible across runs and platforms. Throws NotSymmetricError
// when ||M - M^T||_max > eig_tol * (1 + ||M||_F), NoConvergenceError when the
// sweep budget runs out.
SymEig sym_eig(const Matrix& M, const Tolerances& tol = {}, int max_sweeps = 64);

// Eigenvalue signature with |lambda| <= zero_tol * (1 + ||M||_F) counted as zero.
Inertia inertia(const Matrix& M, double zero_tol, const Tolerances& tol = {});

// Classification of lambda_1(M) against the band psd_tol * (1 + ||M||_F).
// The lower test is inclusive: lambda_1 <= -band classifies NegSemidefinite,
// so psd_tol = 0 turns lambda_1 = 0 into NegSemidefinite rather than Marginal.
Definiteness definiteness(const Matrix& M, const Tolerances& tol = {});
Definiteness definiteness_of(double lambda1, double frob, const Tolerances& tol);

// Gauss-Jordan inverse with partial pivoting. Throws SingularError when the
// pivot drops to singular_tol * ||M||_F or below.
Matrix invert(const Matrix& M, const Tolerances& tol = {});

// exp(A t) by scaling-and-squaring over a degree-17 Taylor kernel; the a
// priori truncation bound stays under exp_tol for ||A t||_F <= 64. Throws
// OverflowError when the scaling budget (2^48) is exceeded or the result
// leaves the representable range.
Matrix mat_exp(const Matrix& A, double t, const Tolerances& tol = {});

}  // namespace invkit
