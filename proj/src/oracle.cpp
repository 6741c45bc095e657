#include "invkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invkit/errors.hpp"
#include "invkit/numerics.hpp"
#include "invkit/rng.hpp"
#include "invkit/sets.hpp"

namespace invkit {

namespace {

constexpr double kStateCap = 1e150;

double falsify_dt(const Problem& problem) {
  if (problem.discrete) return 1.0;
  const double scale = std::max(1e-8, problem.A.frobenius_norm());
  return std::min(0.05, 0.1 / scale);
}

// Walks x_{k+1} = Phi x_k and reports the first state classified Outside.
// Overflow ends the walk quietly: an unbounded trajectory inside a cone is
// not a violation, and for bounded sets the escape shows up long before.
std::optional<std::pair<Vector, std::size_t>> first_escape(const SetDescription& set,
                                                           const Matrix& Phi, Vector x,
                                                           std::size_t steps,
                                                           const Tolerances& tol) {
  for (std::size_t k = 1; k <= steps; ++k) {
    x = Phi * x;
    if (!all_finite(x) || max_abs(x) > kStateCap) return std::nullopt;
    if (membership(set, x, tol.membership_tol, tol).cls == Membership::Outside)
      return std::make_pair(std::move(x), k);
  }
  return std::nullopt;
}

}  // namespace

Trajectory simulate(const Problem& problem, const Vector& x0, std::size_t steps, double dt) {
  if (x0.size() != problem.A.rows())
    throw DimensionMismatchError("simulate: x0 does not match the system dimension");
  if (!problem.discrete && !(dt > 0.0))
    throw ValidationError("simulate: continuous-time simulation needs dt > 0");
  const Matrix Phi =
      problem.discrete ? problem.A : mat_exp(problem.A, dt, problem.tol);
  Trajectory tr;
  tr.states.push_back(x0);
  tr.times.push_back(0.0);
  Vector x = x0;
  for (std::size_t k = 1; k <= steps; ++k) {
    x = Phi * x;
    if (!all_finite(x) || max_abs(x) > kStateCap)
      throw OverflowError("simulate: state overflow at step " + std::to_string(k));
    tr.states.push_back(x);
    tr.times.push_back(problem.discrete ? static_cast<double>(k)
                                        : static_cast<double>(k) * dt);
  }
  return tr;
}

FalsifyResult falsify(const Problem& problem, std::size_t samples, std::size_t steps,
                      std::uint64_t seed) {
  const SetDescription& set = problem.set;
  const Tolerances& tol = problem.tol;
  Rng rng(seed);
  FalsifyResult out;

  std::vector<Vector> starts;
  const Vector anchor = anchor_point(set, tol);
  const std::size_t boundary_share = samples - samples / 4;
  try {
    BoundarySample bs = sample_boundary(set, std::max<std::size_t>(boundary_share, 1), rng, tol);
    for (auto& p : bs.points) starts.push_back(std::move(p));
    // A few blends toward the anchor probe the interior as well.
    for (std::size_t i = 0; i < samples / 4 && i < starts.size(); ++i) {
      Vector blend(anchor.size());
      for (std::size_t k = 0; k < anchor.size(); ++k)
        blend[k] = anchor[k] + 0.5 * (starts[i][k] - anchor[k]);
      starts.push_back(std::move(blend));
    }
  } catch (const DegenerateSetError&) {
  }
  if (starts.empty()) starts.push_back(anchor);
  if (starts.size() > samples) starts.resize(samples);

  const double dt = falsify_dt(problem);
  const Matrix Phi = problem.discrete ? problem.A : mat_exp(problem.A, dt, tol);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const Vector& x0 = starts[s];
    if (membership(set, x0, tol.membership_tol, tol).cls == Membership::Outside)
      continue;  // blends can land outside nonconvex double cones
    ++out.samples_tried;
    const auto escape = first_escape(set, Phi, x0, steps, tol);
    if (escape.has_value()) {
      Witness w;
      w.x = x0;
      w.image = escape->first;
      w.violation = -membership(set, escape->first, tol.membership_tol, tol).slack;
      w.note = "trajectory escape (sample " + std::to_string(s) + ", step " +
               std::to_string(escape->second) + ")";
      out.witness = std::move(w);
      out.sample_index = s;
      out.step_index = escape->second;
      return out;
    }
  }
  return out;
}

NagumoReport nagumo_sample_check(const Problem& problem, std::size_t samples,
                                 std::uint64_t seed) {
  if (problem.discrete)
    throw ValidationError("nagumo_sample_check: continuous-time problems only");
  const SetDescription& set = problem.set;
  const Tolerances& tol = problem.tol;
  Rng rng(seed);
  NagumoReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  BoundarySample bs = sample_boundary(set, samples, rng, tol);
  for (const auto& x : bs.points) {
    const double viol = tangent_violation(set, x, problem.A * x, tol.membership_tol, tol);
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_point = x;
    }
  }
  rep.samples_used = bs.points.size();
  return rep;
}

bool witness_replays(const Problem& problem, const Witness& w, std::string& why) {
  const SetDescription& set = problem.set;
  const Tolerances& tol = problem.tol;
  if (w.x.size() != problem.A.rows()) {
    why = "witness point has the wrong dimension";
    return false;
  }
  if (membership(set, w.x, tol.membership_tol, tol).cls == Membership::Outside) {
    why = "witness point lies outside the set";
    return false;
  }
  if (problem.discrete) {
    if (membership(set, problem.A * w.x, tol.membership_tol, tol).cls == Membership::Outside)
      return true;
    why = "one-step image of the witness stays in the set";
    return false;
  }
  for (double dt : {0.001, 0.01, 0.1, 0.5, 1.0, 2.0}) {
    Matrix Phi;
    try {
      Phi = mat_exp(problem.A, dt, tol);
    } catch (const OverflowError&) {
      continue;
    }
    if (first_escape(set, Phi, w.x, 50, tol).has_value()) return true;
  }
  why = "no sampled flow time takes the witness outside the set";
  return false;
}

namespace {

bool witness_is_mandatory(SetKind kind) {
  switch (kind) {
    case SetKind::HPolyhedron:
    case SetKind::HCone:
    case SetKind::VPolyhedron:
    case SetKind::VCone:
    case SetKind::Ellipsoid:
      return true;
    default:
      return false;
  }
}

}  // namespace

CrossValidation cross_validate(const Problem& problem, const CheckReport& report,
                               std::size_t budget) {
  CrossValidation cv;
  auto note = [&cv](std::string s) { cv.notes.push_back(std::move(s)); };

  switch (report.verdict) {
    case Verdict::Invariant: {
      const auto violations = verify_certificate(problem.A, problem.set, problem.discrete,
                                                 report.certificate, problem.tol);
      for (const auto& v : violations) {
        cv.contradiction = true;
        note("certificate violation: " + v);
      }
      const FalsifyResult fr = falsify(problem, budget, 50, problem.seed);
      if (fr.witness.has_value()) {
        cv.contradiction = true;
        note("verdict Invariant but a simulated trajectory escapes: " + fr.witness->note);
      } else {
        note("falsifier found no escape (" + std::to_string(fr.samples_tried) +
             " starts, 50 steps each)");
      }
      break;
    }
    case Verdict::NotInvariant: {
      const bool mandatory = witness_is_mandatory(problem.set.kind());
      if (!report.witness.has_value()) {
        if (mandatory) {
          cv.contradiction = true;
          note("verdict NotInvariant without a witness on a set kind that requires one");
        } else {
          note("no witness attached (best-effort kind)");
        }
        break;
      }
      std::string why;
      if (witness_replays(problem, *report.witness, why)) {
        note("witness replays: trajectory leaves the set");
      } else if (mandatory &&
                 report.witness->note.find("direction-level") == std::string::npos) {
        cv.contradiction = true;
        note("witness does not replay: " + why);
      } else {
        note("witness does not replay (" + why + "); best-effort only");
      }
      break;
    }
    case Verdict::Inconclusive:
      note("Inconclusive verdict: nothing to cross-check");
      break;
  }
  return cv;
}

}  // namespace invkit
