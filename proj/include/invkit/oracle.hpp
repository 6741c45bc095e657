#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invkit/conditions.hpp"
#include "invkit/matrix.hpp"
#include "invkit/problem.hpp"

namespace invkit {

struct Trajectory {
  std::vector<Vector> states;  // states[0] == x0
  std::vector<double> times;   // step index (discrete) or k * dt (continuous)
};

// Rolls the system forward: x_{k+1} = A x_k in discrete time, x(k dt) via the
// matrix exponential in continuous time. Throws OverflowError when the state
// blows past 1e150.
Trajectory simulate(const Problem& problem, const Vector& x0, std::size_t steps, double dt);

struct FalsifyResult {
  std::optional<Witness> witness;  // x = starting point, image = escaped state
  std::size_t sample_index = 0;
  std::size_t step_index = 0;
  std::size_t samples_tried = 0;
};

// Searches for a trajectory that starts in the set and leaves it. Start
// points prefer the boundary (with a few interior blends); the earliest
// violation in (sample, step) order wins. Independent of the checkers: only
// simulation and membership.
FalsifyResult falsify(const Problem& problem, std::size_t samples, std::size_t steps,
                      std::uint64_t seed);

struct NagumoReport {
  double worst_violation = 0.0;  // max over samples of the tangent-cone violation
  std::optional<Vector> worst_point;
  std::size_t samples_used = 0;
};

// Samples boundary points and measures how far the flow direction A x sticks
// out of the tangent cone. Continuous-time problems only.
NagumoReport nagumo_sample_check(const Problem& problem, std::size_t samples,
                                 std::uint64_t seed);

// True when the witness trajectory demonstrably leaves the set: one exact
// step in discrete time, a grid of flow times in continuous time. On failure
// `why` says what went wrong.
bool witness_replays(const Problem& problem, const Witness& w, std::string& why);

struct CrossValidation {
  bool contradiction = false;
  std::vector<std::string> notes;
};

// Replays a checker verdict against the simulation oracle. Invariant verdicts
// must survive a falsification run and certificate re-verification;
// NotInvariant verdicts on polyhedra and ellipsoids must carry a witness that
// replays. Cone witnesses are replayed best-effort.
CrossValidation cross_validate(const Problem& problem, const CheckReport& report,
                               std::size_t budget);

}  // namespace invkit
