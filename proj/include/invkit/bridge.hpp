#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "invkit/conditions.hpp"
#include "invkit/matrix.hpp"
#include "invkit/problem.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

enum class EulerMethod { Forward, Backward };

std::string euler_method_name(EulerMethod m);

struct EulerSpec {
  EulerMethod method = EulerMethod::Forward;
  double dt = 0.0;  // must be positive
};

// One-step map of the Euler discretization: I + dt A for the forward scheme,
// (I - dt A)^{-1} for the backward scheme. Throws SingularError when the
// backward matrix is not invertible at this step size.
Matrix discretize(const Matrix& A, const EulerSpec& spec, const Tolerances& tol);

struct EulerGridEntry {
  double dt = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct EulerSweep {
  std::vector<EulerGridEntry> entries;
  // Largest grid step whose discretized system passes the discrete check.
  // Empirical: a statement about the grid, not a supremum over all dt.
  std::optional<double> largest_passing_dt;
};

// Log-spaced grid of `count` steps spanning [1e-4, 2] / ||A||_F.
std::vector<double> default_dt_grid(const Matrix& A, std::size_t count = 32);

// Discretizes a continuous-time problem at every grid step and runs the
// discrete check on each. Throws ValidationError if the problem is discrete.
EulerSweep max_preserving_dt(const Problem& problem, EulerMethod method,
                             const std::vector<double>& grid);

}  // namespace invkit
