#pragma once

#include <cstdint>
#include <optional>

#include "invkit/matrix.hpp"
#include "invkit/sets.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

// One unit of work: a system matrix, a time regime, and a candidate set.
struct Problem {
  Matrix A;
  bool discrete = true;
  SetDescription set;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::optional<Vector> x0;  // optional start point for trajectory runs
};

}  // namespace invkit
