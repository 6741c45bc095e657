#include "invkit/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "invkit/errors.hpp"
#include "invkit/numerics.hpp"

namespace invkit {

std::string euler_method_name(EulerMethod m) {
  return m == EulerMethod::Forward ? "forward" : "backward";
}

Matrix discretize(const Matrix& A, const EulerSpec& spec, const Tolerances& tol) {
  if (!A.is_square()) throw DimensionMismatchError("discretize: A must be square");
  if (!(spec.dt > 0.0)) throw ValidationError("discretize: dt must be positive");
  const Matrix I = Matrix::identity(A.rows());
  if (spec.method == EulerMethod::Forward) return I + A * spec.dt;
  return invert(I - A * spec.dt, tol);
}

std::vector<double> default_dt_grid(const Matrix& A, std::size_t count) {
  if (count == 0) return {};
  const double scale = A.frobenius_norm() > 0.0 ? A.frobenius_norm() : 1.0;
  const double lo = 1e-4 / scale;
  const double hi = 2.0 / scale;
  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(hi);
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(lo * std::exp(step * static_cast<double>(k)));
  grid.back() = hi;  // kill the rounding drift on the endpoint
  return grid;
}

EulerSweep max_preserving_dt(const Problem& problem, EulerMethod method,
                             const std::vector<double>& grid) {
  if (problem.discrete)
    throw ValidationError("max_preserving_dt: the problem must be continuous-time");
  EulerSweep sweep;
  for (double dt : grid) {
    EulerGridEntry entry;
    entry.dt = dt;
    Problem step = problem;
    step.discrete = true;
    try {
      step.A = discretize(problem.A, {method, dt}, problem.tol);
      entry.verdict = run_check(step).verdict;
    } catch (const SingularError&) {
      entry.verdict = Verdict::Inconclusive;
    }
    if (entry.verdict == Verdict::Invariant &&
        (!sweep.largest_passing_dt || dt > *sweep.largest_passing_dt))
      sweep.largest_passing_dt = dt;
    sweep.entries.push_back(entry);
  }
  return sweep;
}

}  // namespace invkit
