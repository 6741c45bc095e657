#include "invkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "invkit/errors.hpp"

namespace invkit {

namespace {

void require_square(const Matrix& M, const char* who) {
  if (!M.is_square() || M.rows() == 0)
    throw DimensionMismatchError(std::string(who) + ": square nonempty matrix required");
}

}  // namespace

SymEig sym_eig(const Matrix& M, const Tolerances& tol, int max_sweeps) {
  require_square(M, "sym_eig");
  const std::size_t n = M.rows();
  const double frob = M.frobenius_norm();
  const double sym_band = scaled_band(tol.eig_tol, frob);

  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::fabs(M(i, j) - M(j, i)));
  if (asym > sym_band) throw NotSymmetricError("sym_eig: matrix is not symmetric within tolerance");

  // Work on the symmetrized copy; the asymmetry admitted above is sub-band.
  Matrix S(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) S(i, j) = 0.5 * (M(i, j) + M(j, i));
  Matrix U = Matrix::identity(n);

  // Stop once the off-diagonal mass is far below the eigen residual budget.
  const double off_stop = 1e-15 * (1.0 + frob) * static_cast<double>(n);
  const double skip_below = 0.01 * off_stop / static_cast<double>(n * n + 1);

  bool converged = n == 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * S(p, q) * S(p, q);
    if (std::sqrt(off) <= off_stop) {
      converged = true;
      break;
    }

    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = S(p, q);
        if (std::fabs(apq) <= skip_below) continue;
        rotated = true;

        const double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
        double tval;
        if (std::fabs(theta) > 1e12) {
          tval = 1.0 / (2.0 * theta);
        } else {
          tval = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) tval = -tval;
        }
        const double c = 1.0 / std::sqrt(tval * tval + 1.0);
        const double s = tval * c;

        S(p, p) -= tval * apq;
        S(q, q) += tval * apq;
        S(p, q) = S(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double sip = S(i, p), siq = S(i, q);
          S(i, p) = S(p, i) = c * sip - s * siq;
          S(i, q) = S(q, i) = s * sip + c * siq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double uip = U(i, p), uiq = U(i, q);
          U(i, p) = c * uip - s * uiq;
          U(i, q) = s * uip + c * uiq;
        }
      }
    }
    if (!rotated) converged = true;  // every entry below the skip threshold
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * S(p, q) * S(p, q);
    if (std::sqrt(off) > off_stop)
      throw NoConvergenceError("sym_eig: Jacobi sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return S(a, a) > S(b, b); });

  SymEig out;
  out.eigenvalues.resize(n);
  out.U = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = S(src, src);
    // Sign convention: largest-magnitude component positive (first such index
    // wins), so eigenvectors are deterministic functions of the input.
    std::size_t imax = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::fabs(U(i, src));
      if (a > vmax) {
        vmax = a;
        imax = i;
      }
    }
    const double sign = U(imax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.U(i, k) = sign * U(i, src);
  }
  return out;
}

Inertia inertia(const Matrix& M, double zero_tol, const Tolerances& tol) {
  const SymEig eig = sym_eig(M, tol);
  const double band = scaled_band(zero_tol, M.frobenius_norm());
  Inertia sig;
  for (double l : eig.eigenvalues) {
    if (l > band)
      ++sig.positive;
    else if (l < -band)
      ++sig.negative;
    else
      ++sig.zero;
  }
  return sig;
}

Definiteness definiteness_of(double lambda1, double frob, const Tolerances& tol) {
  const double band = scaled_band(tol.psd_tol, frob);
  if (lambda1 <= -band) return Definiteness::NegSemidefinite;
  if (lambda1 >= band) return Definiteness::NotNegSemidefinite;
  return Definiteness::Marginal;
}

Definiteness definiteness(const Matrix& M, const Tolerances& tol) {
  const SymEig eig = sym_eig(M, tol);
  return definiteness_of(eig.eigenvalues.front(), M.frobenius_norm(), tol);
}

Matrix invert(const Matrix& M, const Tolerances& tol) {
  require_square(M, "invert");
  const std::size_t n = M.rows();
  const double pivot_floor = tol.singular_tol * M.frobenius_norm();

  Matrix a = M;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (std::fabs(a(piv, col)) <= pivot_floor)
      throw SingularError("invert: pivot below singular tolerance");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Matrix mat_exp(const Matrix& A, double t, const Tolerances&) {
  require_square(A, "mat_exp");
  if (!std::isfinite(t)) throw OverflowError("mat_exp: non-finite time");
  const std::size_t n = A.rows();
  Matrix B = A * t;
  const double norm = B.frobenius_norm();
  if (!std::isfinite(norm)) throw OverflowError("mat_exp: non-finite scaled matrix");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  if (squarings > 48) throw OverflowError("mat_exp: scaling budget exceeded");
  if (squarings > 0) B = B * std::pow(2.0, -squarings);

  // Degree-17 Taylor kernel; truncation below 1e-21 for ||B||_F <= 0.5.
  Matrix E = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 17; ++k) {
    term = term * B * (1.0 / static_cast<double>(k));
    E = E + term;
  }
  for (int k = 0; k < squarings; ++k) E = E * E;
  if (!E.all_finite()) throw OverflowError("mat_exp: result out of range");
  return E;
}

}  // namespace invkit
