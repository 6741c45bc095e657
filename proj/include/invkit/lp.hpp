#pragma once

#include <cstddef>
#include <vector>

#include "invkit/matrix.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

enum class VarSign { Nonnegative, Free };

// Feasibility program over z: E z = f, C z <= d, per-variable sign constraints.
// Either matrix block may be empty (0 rows); column counts must match
// signs.size() when nonempty.
struct LinearProgramFeas {
  Matrix E;
  Vector f;
  Matrix C;
  Vector d;
  std::vector<VarSign> signs;

  std::size_t num_vars() const { return signs.size(); }
};

// Feasible: z with ||E z - f||_max <= lp_tol, C z <= d + lp_tol, and
// z_i >= -lp_tol on Nonnegative variables.
// Infeasible: y (length rows(E) + rows(C)) certifying the alternative:
//   (E^T y_E + C^T y_C)_i <= lp_tol on Nonnegative vars, |.| <= lp_tol on Free
//   vars, y_C <= lp_tol componentwise, and f^T y_E + d^T y_C > lp_tol.
// infeasibility carries the phase-1 optimum (== f^T y_E + d^T y_C).
struct FeasOutcome {
  bool feasible = false;
  Vector z;
  Vector y;
  double infeasibility = 0.0;
};

FeasOutcome solve_feasibility(const LinearProgramFeas& p, const Tolerances& tol = {});

// Alternative pair for P z = d, z >= 0. Exactly one branch is populated:
// feasible with the primal z, or infeasible with y such that P^T y <= 0 and
// d^T y > 0 (within lp_tol bands).
struct FarkasOutcome {
  bool feasible = false;
  Vector z;
  Vector y;
};

FarkasOutcome solve_farkas(const Matrix& P, const Vector& d, const Tolerances& tol = {});

// max c^T x subject to G x <= b, x free.
struct LinOptOutcome {
  enum class Status { Optimum, Unbounded, Infeasible };
  Status status = Status::Infeasible;
  Vector x;      // Optimum: argmax. Unbounded: a feasible base point.
  double value = 0.0;
  Vector ray;    // Unbounded: improving direction, G ray <= 0 and c^T ray > 0
};

LinOptOutcome maximize_linear(const Vector& c, const Matrix& G, const Vector& b,
                              const Tolerances& tol = {});

// Optimizes obj over the feasible region of p (maximize or minimize). Shared
// plumbing for membership depth and boundary sampling; the three entry points
// above are the module contract, this one is the engine they ride on.
struct OptimizeOutcome {
  enum class Status { Optimum, Unbounded, Infeasible };
  Status status = Status::Infeasible;
  Vector z;      // Optimum: argopt. Unbounded: a feasible base point.
  double value = 0.0;
  Vector ray;
  Vector y;
  double infeasibility = 0.0;
};

OptimizeOutcome optimize(const LinearProgramFeas& p, const Vector& obj, bool maximize,
                         const Tolerances& tol = {});

}  // namespace invkit
