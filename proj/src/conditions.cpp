#include "invkit/conditions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "invkit/errors.hpp"
#include "invkit/lp.hpp"
#include "invkit/rng.hpp"

namespace invkit {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const ScalarInterval& iv) {
  if (iv.empty) return "empty";
  return "[" + fmt(iv.lo) + ", " + fmt(iv.hi) + "]";
}

void add_diag(CheckReport& r, std::string key, std::string value) {
  r.diagnostics.emplace_back(std::move(key), std::move(value));
}

CheckReport finish(CheckReport r, const Stopwatch& sw, const Tolerances& tol) {
  r.tolerances = tol;
  r.elapsed_seconds = sw.seconds();
  return r;
}

double lambda1_of(const Matrix& M, const Tolerances& tol) {
  return sym_eig(M, tol).eigenvalues.front();
}

std::string definiteness_name(Definiteness d) {
  switch (d) {
    case Definiteness::NegSemidefinite: return "NegSemidefinite";
    case Definiteness::Marginal: return "Marginal";
    case Definiteness::NotNegSemidefinite: return "NotNegSemidefinite";
  }
  return "unknown";
}

void require_square_system(const Matrix& A, const SetDescription& set, const char* who) {
  if (!A.is_square() || A.rows() != set.dim())
    throw DimensionMismatchError(std::string(who) + ": A must be n x n matching the set dimension");
}

// Row subproblem shared by the polyhedral checkers: h with G^T h = target,
// b^T h <= cap, h >= 0 except one optional free entry (the diagonal of the
// continuous condition).
FeasOutcome polyhedron_row(const Matrix& Gt, const Vector& b, const Vector& target, double cap,
                           std::optional<std::size_t> free_index, const Tolerances& tol) {
  const std::size_t m = b.size();
  LinearProgramFeas p;
  p.E = Gt;
  p.f = target;
  p.C = Matrix(1, m);
  for (std::size_t j = 0; j < m; ++j) p.C(0, j) = b[j];
  p.d = {cap};
  p.signs.assign(m, VarSign::Nonnegative);
  if (free_index.has_value()) p.signs[*free_index] = VarSign::Free;
  return solve_feasibility(p, tol);
}

// Point where c^T x exceeds `level` over {G x <= b}, if the LP exposes one.
std::optional<Vector> escape_point(const Vector& c, const Matrix& G, const Vector& b,
                                   double level, const Tolerances& tol) {
  const LinOptOutcome res = maximize_linear(c, G, b, tol);
  const double band = scaled_band(tol.lp_tol, std::fabs(level));
  if (res.status == LinOptOutcome::Status::Optimum) {
    if (res.value > level + band) return res.x;
    return std::nullopt;
  }
  if (res.status == LinOptOutcome::Status::Unbounded) {
    const double gain = dot(c, res.ray);
    if (gain <= 0.0) return std::nullopt;
    const double tau = std::max(1.0, (level + 1.0 + std::fabs(level) - dot(c, res.x)) / gain);
    Vector x = res.x;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += tau * res.ray[k];
    return x;
  }
  return std::nullopt;
}

Witness make_discrete_witness(const Matrix& A, const SetDescription& set, const Vector& x,
                              std::string note, const Tolerances& tol) {
  Witness w;
  w.x = x;
  w.image = A * x;
  const MembershipReport rep = membership(set, w.image, tol.membership_tol, tol);
  w.violation = -rep.slack;
  w.note = std::move(note);
  return w;
}

// Best-effort escape witness for the quadratic-family discrete checks:
// boundary samples (cone kinds seeded with the axis point) whose image lands
// Outside.
std::optional<Witness> sampled_discrete_escape(const Matrix& A, const SetDescription& set,
                                               std::size_t budget, const Tolerances& tol) {
  std::vector<Vector> candidates;
  if (set.is_cone_kind()) {
    Vector e(set.dim(), 0.0);
    e[set.dim() - 1] = 1.0;
    candidates.push_back(set.cone().T * e);
  }
  Rng rng(0x1f2e3d4c5b6a7988ULL);
  try {
    BoundarySample bs = sample_boundary(set, budget, rng, tol);
    for (auto& p : bs.points) candidates.push_back(std::move(p));
  } catch (const DegenerateSetError&) {
  }
  for (const auto& x : candidates) {
    const Vector image = A * x;
    const MembershipReport rep = membership(set, image, tol.membership_tol, tol);
    if (rep.cls == Membership::Outside) {
      Witness w;
      w.x = x;
      w.image = image;
      w.violation = -rep.slack;
      w.note = "sampled boundary point whose image leaves the set";
      return w;
    }
  }
  return std::nullopt;
}

// Boundary point with outward flow (positive d/dt of the quadratic form) for
// the continuous cone checks.
std::optional<Witness> sampled_flow_escape(const Matrix& A, const SetDescription& set,
                                           std::size_t budget, const Tolerances& tol) {
  std::vector<Vector> candidates;
  Rng rng(0x8899aabbccddeeffULL);
  try {
    BoundarySample bs = sample_boundary(set, budget, rng, tol);
    candidates = std::move(bs.points);
  } catch (const DegenerateSetError&) {
    return std::nullopt;
  }
  const double band = scaled_band(tol.psd_tol, A.frobenius_norm() * set.Q().frobenius_norm());
  std::optional<Witness> best;
  for (const auto& x : candidates) {
    const Vector image = A * x;
    const double outward = 2.0 * dot(image, set.Q() * x);  // d/dt of x^T Q x
    if (outward > band && (!best || outward > best->violation)) {
      Witness w;
      w.x = x;
      w.image = image;
      w.violation = outward;
      w.note = "boundary point with outward quadratic flow";
      best = w;
    }
  }
  return best;
}

struct TernaryResult {
  double t = 0.0;
  double value = 0.0;
};

// Minimizes a convex scalar function by ternary search, tracking the best
// evaluation seen (handles plateaus and degenerate intervals).
template <typename F>
TernaryResult ternary_min(F&& g, double lo, double hi, double width_tol, int cap = 200) {
  TernaryResult best;
  best.t = 0.5 * (lo + hi);
  best.value = g(best.t);
  auto consider = [&](double t, double v) {
    if (v < best.value) {
      best.t = t;
      best.value = v;
    }
  };
  consider(lo, g(lo));
  if (hi != lo) consider(hi, g(hi));
  for (int it = 0; it < cap && hi - lo > width_tol; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double v1 = g(m1);
    const double v2 = g(m2);
    consider(m1, v1);
    consider(m2, v2);
    if (v1 < v2)
      hi = m2;
    else
      lo = m1;
  }
  const double mid = 0.5 * (lo + hi);
  consider(mid, g(mid));
  return best;
}

struct ScalarLmiSearch {
  ScalarInterval interval;
  bool feasible = false;
  double t_star = 0.0;   // certified scalar (argmin for mu, max feasible for eta)
  double g_star = 0.0;   // lambda_1 of the LMI at t_star
};

ScalarLmiSearch search_scalar_lmi(const Matrix& A, const Matrix& Q, bool discrete,
                                  const ScalarInterval& interval, bool push_right,
                                  const Tolerances& tol) {
  ScalarLmiSearch out;
  out.interval = interval;
  if (interval.empty) return out;

  auto lmi = [&](double t) { return discrete ? discrete_lmi(A, Q, t) : continuous_lmi(A, Q, t); };
  auto g = [&](double t) { return lambda1_of(lmi(t), tol); };
  auto feasible_at = [&](double t) {
    const Matrix L = lmi(t);
    return lambda1_of(L, tol) <= scaled_band(tol.psd_tol, L.frobenius_norm());
  };

  const double width = tol.mu_search_tol * (1.0 + std::fabs(interval.lo) + std::fabs(interval.hi));
  const TernaryResult tern = ternary_min(g, interval.lo, interval.hi, width);
  if (!feasible_at(tern.t)) {
    out.t_star = tern.t;
    out.g_star = tern.value;
    return out;
  }
  out.feasible = true;
  out.t_star = tern.t;
  if (push_right) {
    if (feasible_at(interval.hi)) {
      out.t_star = interval.hi;
    } else {
      double good = tern.t, bad = interval.hi;
      for (int it = 0; it < 80 && bad - good > width; ++it) {
        const double mid = 0.5 * (good + bad);
        (feasible_at(mid) ? good : bad) = mid;
      }
      out.t_star = good;
    }
  }
  out.g_star = g(out.t_star);
  return out;
}

Matrix symmetric_inverse_sqrt(const Matrix& Q, const Tolerances& tol) {
  const SymEig eig = sym_eig(Q, tol);
  const std::size_t n = Q.rows();
  const double band = scaled_band(tol.eig_tol, Q.frobenius_norm());
  if (eig.eigenvalues.back() <= band)
    throw ValidationError("ellipsoid matrix is not positive definite");
  Matrix W(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += eig.U(i, k) * eig.U(j, k) / std::sqrt(eig.eigenvalues[k]);
      W(i, j) = s;
    }
  return W;
}

Vector scaled_to_unit_quadric(const Vector& v, const Matrix& Q) {
  const double q = dot(v, Q * v);
  if (q <= 0.0) throw NumericalBreakdownError("witness direction has nonpositive Q-norm");
  return (1.0 / std::sqrt(q)) * v;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Invariant: return "Invariant";
    case Verdict::NotInvariant: return "NotInvariant";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

std::string certificate_kind_name(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::None: return "none";
    case Certificate::Kind::NonnegMatrix: return "nonneg_matrix";
    case Certificate::Kind::ODNonnegMatrix: return "od_nonneg_matrix";
    case Certificate::Kind::VRepMatrix: return "vrep_matrix";
    case Certificate::Kind::ScalarLMI: return "scalar_lmi";
    case Certificate::Kind::SufficientOnly: return "sufficient_only";
  }
  return "unknown";
}

Matrix discrete_lmi(const Matrix& A, const Matrix& Q, double mu) {
  return A.transposed() * (Q * A) - Q * mu;
}

Matrix continuous_lmi(const Matrix& A, const Matrix& Q, double eta) {
  return A.transposed() * Q + Q * A - Q * eta;
}

double discrete_mu_min(const Matrix& A, const Matrix& Q, const Tolerances& tol) {
  const Matrix W = symmetric_inverse_sqrt(Q, tol);
  const Matrix M = W * (A.transposed() * (Q * A)) * W;
  return lambda1_of(M, tol);
}

double smallest_feasible_mu(const Matrix& A, const Matrix& Q, const Tolerances& tol) {
  auto g = [&](double mu) { return lambda1_of(discrete_lmi(A, Q, mu), tol); };
  if (g(0.0) <= 0.0) return 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12)
      throw NumericalBreakdownError("no feasible mu below 1e12; Q is not positive definite?");
  }
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  // Bisect close to machine precision; the closed form this is checked
  // against resolves mu to relative epsilon, so the default search tolerance
  // would dominate the comparison on large mu.
  const double width = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + hi);
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// ---- polyhedral checkers ----------------------------------------------

CheckReport check_discrete_polyhedron(const Matrix& A, const SetDescription& P,
                                      const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, P, "check_discrete_polyhedron");
  if (!P.is_h_family())
    throw DimensionMismatchError("check_discrete_polyhedron: H-representation required");
  CheckReport r;
  const Matrix& G = P.G();
  const Vector& b = P.b();
  const Matrix GA = G * A;
  const Matrix Gt = G.transposed();
  const std::size_t m = G.rows();
  Matrix H(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const FeasOutcome row = polyhedron_row(Gt, b, GA.row(i), b[i], std::nullopt, tol);
    if (!row.feasible) {
      r.verdict = Verdict::NotInvariant;
      r.failed_index = i;
      add_diag(r, "infeasible_row", std::to_string(i));
      add_diag(r, "row_infeasibility", fmt(row.infeasibility));
      const auto x = escape_point(GA.row(i), G, b, b[i], tol);
      if (x.has_value()) {
        r.witness = make_discrete_witness(A, P, *x, "image violates row " + std::to_string(i), tol);
      } else {
        r.verdict = Verdict::Inconclusive;
        add_diag(r, "note", "row certificate infeasible but no escape point found");
      }
      return finish(std::move(r), sw, tol);
    }
    for (std::size_t j = 0; j < m; ++j) H(i, j) = row.z[j];
  }
  r.verdict = Verdict::Invariant;
  r.certificate.kind = Certificate::Kind::NonnegMatrix;
  r.certificate.M = std::move(H);
  return finish(std::move(r), sw, tol);
}

CheckReport check_continuous_polyhedron(const Matrix& A, const SetDescription& P,
                                        const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, P, "check_continuous_polyhedron");
  if (!P.is_h_family())
    throw DimensionMismatchError("check_continuous_polyhedron: H-representation required");
  CheckReport r;
  const Matrix& G = P.G();
  const Vector& b = P.b();
  const Matrix GA = G * A;
  const Matrix Gt = G.transposed();
  const std::size_t m = G.rows();
  const std::size_t n = G.cols();
  Matrix H(m, m);
  std::optional<std::size_t> failed;
  for (std::size_t i = 0; i < m; ++i) {
    const FeasOutcome row = polyhedron_row(Gt, b, GA.row(i), 0.0, i, tol);
    if (!row.feasible) {
      failed = i;
      add_diag(r, "infeasible_row", std::to_string(i));
      break;
    }
    for (std::size_t j = 0; j < m; ++j) H(i, j) = row.z[j];
  }
  if (!failed.has_value()) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ODNonnegMatrix;
    r.certificate.M = std::move(H);
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  r.failed_index = failed;
  // Boundary witness: maximize the outward flow component over each facet.
  for (std::size_t j = 0; j < m; ++j) {
    LinearProgramFeas facet;
    facet.E = Matrix(1, n);
    for (std::size_t k = 0; k < n; ++k) facet.E(0, k) = G(j, k);
    facet.f = {b[j]};
    facet.C = G;
    facet.d = b;
    facet.signs.assign(n, VarSign::Free);
    const Vector c = GA.row(j);
    const OptimizeOutcome res = optimize(facet, c, /*maximize=*/true, tol);
    const double band = scaled_band(tol.lp_tol, max_abs(c));
    Vector x;
    if (res.status == OptimizeOutcome::Status::Optimum && res.value > band) {
      x = res.z;
    } else if (res.status == OptimizeOutcome::Status::Unbounded && dot(c, res.ray) > 0.0) {
      x = res.z;
      const double tau = std::max(1.0, (1.0 - dot(c, x)) / dot(c, res.ray));
      for (std::size_t k = 0; k < n; ++k) x[k] += tau * res.ray[k];
    } else {
      continue;
    }
    Witness w;
    w.x = x;
    w.image = A * x;
    w.violation = dot(c, x);
    w.note = "outward flow across facet " + std::to_string(j);
    r.witness = std::move(w);
    add_diag(r, "violating_facet", std::to_string(j));
    break;
  }
  if (!r.witness.has_value()) {
    r.verdict = Verdict::Inconclusive;
    add_diag(r, "note", "row certificate infeasible but no facet shows outward flow");
  }
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_v_polyhedron(const Matrix& A, const SetDescription& P,
                                        const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, P, "check_discrete_v_polyhedron");
  if (!P.is_v_family())
    throw DimensionMismatchError("check_discrete_v_polyhedron: V-representation required");
  CheckReport r;
  const std::size_t n = P.dim();
  const std::size_t l1 = P.vertices().size();
  const std::size_t l2 = P.rays().size();
  Matrix L(l1 + l2, l1 + l2);

  // Vertex images: convex-plus-conic combinations (vertex weights sum to 1).
  LinearProgramFeas vp;
  if (l1 > 0) {
    vp.E = Matrix(n + 1, l1 + l2);
    for (std::size_t c = 0; c < l1; ++c) {
      for (std::size_t t = 0; t < n; ++t) vp.E(t, c) = P.vertices()[c][t];
      vp.E(n, c) = 1.0;
    }
    for (std::size_t c = 0; c < l2; ++c)
      for (std::size_t t = 0; t < n; ++t) vp.E(t, l1 + c) = P.rays()[c][t];
    vp.signs.assign(l1 + l2, VarSign::Nonnegative);
  }
  for (std::size_t i = 0; i < l1; ++i) {
    const Vector image = A * P.vertices()[i];
    vp.f = image;
    vp.f.push_back(1.0);
    const FeasOutcome res = solve_feasibility(vp, tol);
    if (!res.feasible) {
      r.verdict = Verdict::NotInvariant;
      r.failed_index = i;
      add_diag(r, "failing_generator", "vertex " + std::to_string(i));
      r.witness = make_discrete_witness(A, P, P.vertices()[i],
                                        "vertex image leaves the set", tol);
      return finish(std::move(r), sw, tol);
    }
    for (std::size_t j = 0; j < l1 + l2; ++j) L(j, i) = res.z[j];
  }

  // Ray images: conic combinations of the rays alone.
  LinearProgramFeas rp;
  if (l2 > 0) {
    rp.E = Matrix(n, l2);
    for (std::size_t c = 0; c < l2; ++c)
      for (std::size_t t = 0; t < n; ++t) rp.E(t, c) = P.rays()[c][t];
    rp.signs.assign(l2, VarSign::Nonnegative);
  }
  for (std::size_t j = 0; j < l2; ++j) {
    rp.f = A * P.rays()[j];
    const FeasOutcome res = solve_feasibility(rp, tol);
    if (!res.feasible) {
      r.verdict = Verdict::NotInvariant;
      r.failed_index = l1 + j;
      add_diag(r, "failing_generator", "ray " + std::to_string(j));
      // Walk out along the ray until the image of the point escapes.
      const Vector base = anchor_point(P, tol);
      std::optional<Witness> w;
      double tau = 1.0;
      for (int k = 0; k < 80; ++k, tau *= 2.0) {
        Vector x = base;
        for (std::size_t t = 0; t < n; ++t) x[t] += tau * P.rays()[j][t];
        if (!all_finite(x)) break;
        const Vector image = A * x;
        const MembershipReport rep = membership(P, image, tol.membership_tol, tol);
        if (rep.cls == Membership::Outside) {
          w = Witness{x, image, -rep.slack, "point along escaping ray"};
          break;
        }
      }
      if (!w.has_value())
        w = Witness{P.rays()[j], A * P.rays()[j], res.infeasibility,
                    "ray image outside the ray cone (direction-level witness)"};
      r.witness = std::move(w);
      return finish(std::move(r), sw, tol);
    }
    for (std::size_t t = 0; t < l2; ++t) L(l1 + t, l1 + j) = res.z[t];
  }

  r.verdict = Verdict::Invariant;
  r.certificate.kind = Certificate::Kind::VRepMatrix;
  r.certificate.M = std::move(L);
  return finish(std::move(r), sw, tol);
}

CheckReport check_continuous_v_polyhedron(const Matrix& A, const SetDescription& P,
                                          const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, P, "check_continuous_v_polyhedron");
  if (!P.is_v_family())
    throw DimensionMismatchError("check_continuous_v_polyhedron: V-representation required");
  CheckReport r;
  const std::size_t n = P.dim();
  const std::size_t l1 = P.vertices().size();
  const std::size_t l2 = P.rays().size();
  Matrix L(l1 + l2, l1 + l2);
  std::optional<std::size_t> failed;
  double fail_amount = 0.0;

  // Vertex columns: flow is a combination of edge directions toward the other
  // generators plus rays; vertex weights sum to zero with only the own entry
  // sign-free.
  for (std::size_t i = 0; i < l1 && !failed; ++i) {
    LinearProgramFeas p;
    p.E = Matrix(n + 1, l1 + l2);
    for (std::size_t c = 0; c < l1; ++c) {
      for (std::size_t t = 0; t < n; ++t) p.E(t, c) = P.vertices()[c][t];
      p.E(n, c) = 1.0;
    }
    for (std::size_t c = 0; c < l2; ++c)
      for (std::size_t t = 0; t < n; ++t) p.E(t, l1 + c) = P.rays()[c][t];
    p.f = A * P.vertices()[i];
    p.f.push_back(0.0);
    p.signs.assign(l1 + l2, VarSign::Nonnegative);
    p.signs[i] = VarSign::Free;
    const FeasOutcome res = solve_feasibility(p, tol);
    if (!res.feasible) {
      failed = i;
      fail_amount = res.infeasibility;
      add_diag(r, "failing_generator", "vertex " + std::to_string(i));
      break;
    }
    for (std::size_t j = 0; j < l1 + l2; ++j) L(j, i) = res.z[j];
  }

  // Ray columns: flow along a ray stays in the ray cone, own entry free.
  for (std::size_t j = 0; j < l2 && !failed; ++j) {
    LinearProgramFeas p;
    p.E = Matrix(n, l2);
    for (std::size_t c = 0; c < l2; ++c)
      for (std::size_t t = 0; t < n; ++t) p.E(t, c) = P.rays()[c][t];
    p.f = A * P.rays()[j];
    p.signs.assign(l2, VarSign::Nonnegative);
    p.signs[j] = VarSign::Free;
    const FeasOutcome res = solve_feasibility(p, tol);
    if (!res.feasible) {
      failed = l1 + j;
      fail_amount = res.infeasibility;
      add_diag(r, "failing_generator", "ray " + std::to_string(j));
      break;
    }
    for (std::size_t t = 0; t < l2; ++t) L(l1 + t, l1 + j) = res.z[t];
  }

  if (!failed.has_value()) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ODNonnegMatrix;
    r.certificate.M = std::move(L);
    return finish(std::move(r), sw, tol);
  }

  r.verdict = Verdict::NotInvariant;
  r.failed_index = failed;
  if (*failed < l1) {
    Witness w;
    w.x = P.vertices()[*failed];
    w.image = A * w.x;
    w.violation = fail_amount;
    w.note = "flow exits the tangent cone at this vertex";
    r.witness = std::move(w);
  } else {
    // The failing generator is a direction; look for a concrete boundary
    // point with outward flow.
    Rng rng(0x7a6b5c4d3e2f1908ULL);
    std::optional<Witness> w;
    try {
      BoundarySample bs = sample_boundary(P, 64, rng, tol);
      for (const auto& x : bs.points) {
        const Vector image = A * x;
        const double viol =
            tangent_violation(P, x, image, tol.membership_tol, tol);
        if (viol > scaled_band(tol.lp_tol, max_abs(image)) && (!w || viol > w->violation))
          w = Witness{x, image, viol, "boundary point with flow outside the tangent cone"};
      }
    } catch (const DegenerateSetError&) {
    }
    if (!w.has_value())
      w = Witness{P.rays()[*failed - l1], A * P.rays()[*failed - l1], fail_amount,
                  "ray tangent condition infeasible (direction-level witness)"};
    r.witness = std::move(w);
  }
  return finish(std::move(r), sw, tol);
}

// ---- quadratic checkers -----------------------------------------------

CheckReport check_discrete_ellipsoid(const Matrix& A, const SetDescription& E,
                                     const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, E, "check_discrete_ellipsoid");
  if (E.kind() != SetKind::Ellipsoid)
    throw DimensionMismatchError("check_discrete_ellipsoid: ellipsoid required");
  CheckReport r;
  const Matrix& Q = E.Q();
  const Matrix W = symmetric_inverse_sqrt(Q, tol);
  const Matrix M = W * (A.transposed() * (Q * A)) * W;
  const SymEig me = sym_eig(M, tol);
  const double mu_min = me.eigenvalues.front();
  const double mu = std::max(0.0, mu_min);
  const double band = scaled_band(tol.psd_tol, M.frobenius_norm());

  add_diag(r, "mu_min", fmt(mu_min));
  add_diag(r, "mu_free_cross_check",
           definiteness_name(definiteness(discrete_lmi(A, Q, 1.0), tol)));

  if (mu_min <= 1.0 + band) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "mu";
    r.certificate.scalar = mu;
    r.certificate.lambda1 = lambda1_of(discrete_lmi(A, Q, mu), tol);
    r.certificate.side_conditions.emplace_back("mu_min", mu_min);
    return finish(std::move(r), sw, tol);
  }

  r.verdict = Verdict::NotInvariant;
  const Vector x = scaled_to_unit_quadric(W * me.U.col(0), Q);
  Witness w;
  w.x = x;
  w.image = A * x;
  w.violation = dot(w.image, Q * w.image) - 1.0;
  w.note = "boundary point whose image has Q-norm mu_min > 1";
  r.witness = std::move(w);
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_ellipsoid_mufree(const Matrix& A, const SetDescription& E,
                                            const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, E, "check_discrete_ellipsoid_mufree");
  if (E.kind() != SetKind::Ellipsoid)
    throw DimensionMismatchError("check_discrete_ellipsoid_mufree: ellipsoid required");
  CheckReport r;
  const Matrix& Q = E.Q();
  const Matrix L = discrete_lmi(A, Q, 1.0);
  const SymEig le = sym_eig(L, tol);
  const double l1 = le.eigenvalues.front();
  add_diag(r, "lambda1", fmt(l1));
  if (definiteness_of(l1, L.frobenius_norm(), tol) == Definiteness::NotNegSemidefinite) {
    r.verdict = Verdict::NotInvariant;
    const Vector x = scaled_to_unit_quadric(le.U.col(0), Q);
    Witness w;
    w.x = x;
    w.image = A * x;
    w.violation = dot(w.image, Q * w.image) - 1.0;
    w.note = "top eigenvector of A^T Q A - Q, scaled to the boundary";
    r.witness = std::move(w);
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::Invariant;
  r.certificate.kind = Certificate::Kind::ScalarLMI;
  r.certificate.scalar_kind = "mu";
  r.certificate.scalar = 1.0;
  r.certificate.lambda1 = l1;
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_ellipsoid_schur(const Matrix& A, const SetDescription& E,
                                           const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, E, "check_discrete_ellipsoid_schur");
  if (E.kind() != SetKind::Ellipsoid)
    throw DimensionMismatchError("check_discrete_ellipsoid_schur: ellipsoid required");
  CheckReport r;
  const Matrix& Q = E.Q();
  const std::size_t n = Q.rows();
  const double mu_min = discrete_mu_min(A, Q, tol);
  const double nu = std::clamp(mu_min, 0.0, 1.0);
  const Matrix Qinv = invert(Q, tol);
  Matrix B(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      B(i, j) = Qinv(i, j);
      B(i, n + j) = A(i, j);
      B(n + i, j) = A(j, i);
      B(n + i, n + j) = nu * Q(i, j);
    }
  const double neg_l1 = lambda1_of(-1.0 * B, tol);
  add_diag(r, "nu", fmt(nu));
  add_diag(r, "block_lambda1_neg", fmt(neg_l1));

  if (neg_l1 <= scaled_band(tol.psd_tol, B.frobenius_norm())) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "nu";
    r.certificate.scalar = nu;
    r.certificate.lambda1 = neg_l1;
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  const Matrix W = symmetric_inverse_sqrt(Q, tol);
  const SymEig me = sym_eig(W * (A.transposed() * (Q * A)) * W, tol);
  const Vector x = scaled_to_unit_quadric(W * me.U.col(0), Q);
  Witness w;
  w.x = x;
  w.image = A * x;
  w.violation = dot(w.image, Q * w.image) - 1.0;
  w.note = "boundary point whose image has Q-norm mu_min > 1";
  r.witness = std::move(w);
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_quadratic(const Matrix& A, const SetDescription& S,
                                     const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, S, "check_discrete_quadratic");
  if (S.kind() != SetKind::QuadraticSet && S.kind() != SetKind::Ellipsoid)
    throw DimensionMismatchError("check_discrete_quadratic: quadratic set required");
  CheckReport r;
  const Matrix& Q = S.Q();
  auto g = [&](double mu) { return lambda1_of(discrete_lmi(A, Q, mu), tol); };
  const TernaryResult best = ternary_min(g, 0.0, 1.0, tol.mu_search_tol);
  const Matrix L = discrete_lmi(A, Q, best.t);
  const double band = scaled_band(tol.psd_tol, L.frobenius_norm());
  add_diag(r, "lambda1_at_0", fmt(g(0.0)));
  add_diag(r, "lambda1_at_1", fmt(g(1.0)));
  add_diag(r, "mu_star", fmt(best.t));
  add_diag(r, "lambda1_min", fmt(best.value));
  if (best.value <= band) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "mu";
    r.certificate.scalar = best.t;
    r.certificate.lambda1 = best.value;
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  add_diag(r, "note", "no mu in [0,1] makes A^T Q A - mu Q negative semidefinite");
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_double_cone(const Matrix& A, const SetDescription& D,
                                       const Tolerances& tol, std::size_t witness_budget) {
  Stopwatch sw;
  require_square_system(A, D, "check_discrete_double_cone");
  if (!D.is_cone_kind())
    throw DimensionMismatchError("check_discrete_double_cone: cone set required");
  CheckReport r;
  const ScalarInterval iv = mu_interval(A, D, IntervalMode::Full, tol);
  const ScalarLmiSearch search =
      search_scalar_lmi(A, D.Q(), /*discrete=*/true, iv, /*push_right=*/false, tol);
  add_diag(r, "mu_interval", fmt(iv));
  if (!iv.empty) {
    add_diag(r, "mu_star", fmt(search.t_star));
    add_diag(r, "lambda1_at_mu_star", fmt(search.g_star));
  }
  if (search.feasible) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "mu";
    r.certificate.scalar = search.t_star;
    r.certificate.lambda1 = search.g_star;
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  add_diag(r, "note", iv.empty ? "necessity interval for mu is empty"
                               : "LMI infeasible over the necessity interval");
  r.witness = sampled_discrete_escape(A, D, witness_budget, tol);
  return finish(std::move(r), sw, tol);
}

CheckReport check_discrete_lorenz(const Matrix& A, const SetDescription& C,
                                  const Tolerances& tol, std::size_t witness_budget) {
  Stopwatch sw;
  require_square_system(A, C, "check_discrete_lorenz");
  if (C.kind() != SetKind::LorenzCone)
    throw DimensionMismatchError("check_discrete_lorenz: Lorenz cone required");
  CheckReport r;
  const Matrix& Q = C.Q();
  const Vector& axis = C.cone().axis;

  const ScalarInterval iv = mu_interval(A, C, IntervalMode::Full, tol);
  const ScalarLmiSearch search =
      search_scalar_lmi(A, Q, /*discrete=*/true, iv, /*push_right=*/false, tol);

  const double align = dot(axis, A * axis);
  const Vector atu = A.transposed() * axis;
  const Matrix Qinv = invert(Q, tol);
  const double dual = dot(atu, Qinv * atu);
  const bool align_ok = align >= -scaled_band(tol.psd_tol, A.frobenius_norm());
  const bool dual_ok =
      dual <= scaled_band(tol.psd_tol, A.frobenius_norm() * A.frobenius_norm() *
                                           Qinv.frobenius_norm());

  add_diag(r, "mu_interval", fmt(iv));
  add_diag(r, "mu_classification", classify_mu_geometry(A, C, tol).conclusion);
  add_diag(r, "axis_alignment", fmt(align));
  add_diag(r, "dual_scalar", fmt(dual));
  if (!iv.empty) {
    add_diag(r, "mu_star", fmt(search.t_star));
    add_diag(r, "lambda1_at_mu_star", fmt(search.g_star));
  }

  if (search.feasible && align_ok && dual_ok) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "mu";
    r.certificate.scalar = search.t_star;
    r.certificate.lambda1 = search.g_star;
    r.certificate.side_conditions.emplace_back("axis_alignment", align);
    r.certificate.side_conditions.emplace_back("dual_scalar", dual);
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  add_diag(r, "failed_condition", !search.feasible ? "lmi"
                                  : !align_ok      ? "axis_alignment"
                                                   : "dual_halfspace");
  r.witness = sampled_discrete_escape(A, C, witness_budget, tol);
  return finish(std::move(r), sw, tol);
}

std::optional<CheckReport> check_discrete_lorenz_sufficient(const Matrix& A,
                                                            const SetDescription& C,
                                                            const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, C, "check_discrete_lorenz_sufficient");
  if (C.kind() != SetKind::LorenzCone)
    throw DimensionMismatchError("check_discrete_lorenz_sufficient: Lorenz cone required");
  const Matrix M = A.transposed() * (C.Q() * A);
  const double l1 = lambda1_of(M, tol);
  if (l1 > 0.0) return std::nullopt;  // shortcut needs A^T Q A <= 0 outright
  CheckReport r;
  r.verdict = Verdict::Invariant;
  r.certificate.kind = Certificate::Kind::SufficientOnly;
  r.certificate.lambda1 = l1;
  add_diag(r, "lambda1_AtQA", fmt(l1));
  add_diag(r, "note", "sufficient condition only; holds only for singular A");
  return finish(std::move(r), sw, tol);
}

CheckReport check_continuous_ellipsoid(const Matrix& A, const SetDescription& E,
                                       const Tolerances& tol) {
  Stopwatch sw;
  require_square_system(A, E, "check_continuous_ellipsoid");
  if (E.kind() != SetKind::Ellipsoid)
    throw DimensionMismatchError("check_continuous_ellipsoid: ellipsoid required");
  CheckReport r;
  const Matrix& Q = E.Q();
  const Matrix S = continuous_lmi(A, Q, 0.0);
  const SymEig se = sym_eig(S, tol);
  const double l1 = se.eigenvalues.front();
  add_diag(r, "lambda1", fmt(l1));
  switch (definiteness_of(l1, S.frobenius_norm(), tol)) {
    case Definiteness::NegSemidefinite:
      r.verdict = Verdict::Invariant;
      r.certificate.kind = Certificate::Kind::ScalarLMI;
      r.certificate.scalar_kind = "eta";
      r.certificate.scalar = 0.0;
      r.certificate.lambda1 = l1;
      break;
    case Definiteness::Marginal:
      r.verdict = Verdict::Inconclusive;
      add_diag(r, "note", "lambda_1(A^T Q + Q A) inside the tolerance band");
      break;
    case Definiteness::NotNegSemidefinite: {
      r.verdict = Verdict::NotInvariant;
      const Vector x = scaled_to_unit_quadric(se.U.col(0), Q);
      Witness w;
      w.x = x;
      w.image = A * x;
      w.violation = dot(w.image, Q * x);  // positive outward derivative of x^T Q x / 2
      w.note = "boundary point with outward flow";
      r.witness = std::move(w);
      break;
    }
  }
  return finish(std::move(r), sw, tol);
}

namespace {

CheckReport continuous_cone_check(const Matrix& A, const SetDescription& C,
                                  const Tolerances& tol, std::size_t witness_budget,
                                  const char* who) {
  Stopwatch sw;
  require_square_system(A, C, who);
  if (!C.is_cone_kind()) throw DimensionMismatchError(std::string(who) + ": cone set required");
  CheckReport r;
  const ScalarInterval iv = eta_interval(A, C, tol);
  const ScalarLmiSearch search =
      search_scalar_lmi(A, C.Q(), /*discrete=*/false, iv, /*push_right=*/true, tol);
  add_diag(r, "eta_interval", fmt(iv));
  if (!iv.empty) {
    add_diag(r, "eta_star", fmt(search.t_star));
    add_diag(r, "lambda1_at_eta_star", fmt(search.g_star));
    add_diag(r, "eta_star_sign", search.t_star >= 0.0 ? "nonnegative" : "negative");
  }
  if (C.kind() == SetKind::LorenzCone)
    add_diag(r, "origin_equilibrium",
             "the apex is an equilibrium, so no trajectory can cross between the cone halves");
  if (search.feasible) {
    r.verdict = Verdict::Invariant;
    r.certificate.kind = Certificate::Kind::ScalarLMI;
    r.certificate.scalar_kind = "eta";
    r.certificate.scalar = search.t_star;
    r.certificate.lambda1 = search.g_star;
    return finish(std::move(r), sw, tol);
  }
  r.verdict = Verdict::NotInvariant;
  add_diag(r, "note", iv.empty ? "necessity interval for eta is empty"
                               : "LMI infeasible over the necessity interval");
  r.witness = sampled_flow_escape(A, C, witness_budget, tol);
  return finish(std::move(r), sw, tol);
}

}  // namespace

CheckReport check_continuous_double_cone(const Matrix& A, const SetDescription& D,
                                         const Tolerances& tol, std::size_t witness_budget) {
  return continuous_cone_check(A, D, tol, witness_budget, "check_continuous_double_cone");
}

CheckReport check_continuous_lorenz(const Matrix& A, const SetDescription& C,
                                    const Tolerances& tol, std::size_t witness_budget) {
  if (C.kind() != SetKind::LorenzCone)
    throw DimensionMismatchError("check_continuous_lorenz: Lorenz cone required");
  return continuous_cone_check(A, C, tol, witness_budget, "check_continuous_lorenz");
}

// ---- scalar diagnostics -----------------------------------------------

ScalarInterval mu_interval(const Matrix& A, const SetDescription& C, IntervalMode mode,
                           const Tolerances& tol) {
  require_square_system(A, C, "mu_interval");
  const SymEig& eig = C.cone().eig;
  const std::size_t n = C.dim();
  const Matrix AtQA = A.transposed() * (C.Q() * A);
  ScalarInterval iv;
  iv.lo = 0.0;
  for (std::size_t i = 0; mode == IntervalMode::Full && i + 1 < n; ++i) {
    const Vector u = eig.U.col(i);
    iv.lo = std::max(iv.lo, dot(u, AtQA * u) / eig.eigenvalues[i]);
  }
  const Vector un = eig.U.col(n - 1);
  iv.hi = dot(un, AtQA * un) / eig.eigenvalues[n - 1];
  const double band = tol.mu_search_tol * (1.0 + std::fabs(iv.lo) + std::fabs(iv.hi));
  iv.empty = iv.lo > iv.hi + band;
  if (!iv.empty) iv.lo = std::min(iv.lo, iv.hi);
  return iv;
}

ScalarInterval eta_interval(const Matrix& A, const SetDescription& C, const Tolerances& tol) {
  require_square_system(A, C, "eta_interval");
  const SymEig& eig = C.cone().eig;
  const std::size_t n = C.dim();
  const Matrix S = A.transposed() + A;
  ScalarInterval iv;
  iv.lo = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vector u = eig.U.col(i);
    iv.lo = std::max(iv.lo, dot(u, S * u));
  }
  const Vector un = eig.U.col(n - 1);
  iv.hi = dot(un, S * un);
  if (!std::isfinite(iv.lo)) iv.lo = iv.hi;  // n = 1: no lower bound, pick the max
  const double band = tol.mu_search_tol * (1.0 + std::fabs(iv.lo) + std::fabs(iv.hi));
  iv.empty = iv.lo > iv.hi + band;
  if (!iv.empty) iv.lo = std::min(iv.lo, iv.hi);
  return iv;
}

MuGeometryReport classify_mu_geometry(const Matrix& A, const SetDescription& C,
                                      const Tolerances& tol) {
  require_square_system(A, C, "classify_mu_geometry");
  const SymEig& eig = C.cone().eig;
  const Matrix& Q = C.Q();
  const std::size_t n = C.dim();
  MuGeometryReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector w = A * eig.U.col(i);
    const double q = dot(w, Q * w);
    const double band = scaled_band(tol.psd_tol, Q.frobenius_norm() * dot(w, w));
    MuGeometryEntry e;
    e.index = i;
    e.image_quad = q;
    e.placement = q < -band ? "interior" : (q <= band ? "boundary" : "outside");
    rep.entries.push_back(std::move(e));
  }
  rep.interval = mu_interval(A, C, IntervalMode::Full, tol);
  const std::string& axis_place = rep.entries.back().placement;
  bool others_inside = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (rep.entries[i].placement == "outside") others_inside = false;
  if (axis_place == "outside")
    rep.conclusion = "no feasible mu: the axis image leaves the double cone";
  else if (rep.interval.empty)
    rep.conclusion = "no feasible mu: necessity bounds cross";
  else if (axis_place == "boundary" && others_inside)
    rep.conclusion = "mu = 0 is the only candidate";
  else
    rep.conclusion = "mu constrained to " + fmt(rep.interval);
  return rep;
}

DualHalfspaceReport check_dual_halfspace(const Matrix& A, const SetDescription& C,
                                         std::size_t samples, std::uint64_t seed,
                                         const Tolerances& tol) {
  require_square_system(A, C, "check_dual_halfspace");
  if (C.kind() != SetKind::LorenzCone)
    throw DimensionMismatchError("check_dual_halfspace: Lorenz cone required");
  const std::size_t n = C.dim();
  const Vector& axis = C.cone().axis;
  const Matrix Qinv = invert(C.Q(), tol);
  DualHalfspaceReport rep;
  const Vector atu = A.transposed() * axis;
  rep.scalar = dot(atu, Qinv * atu);
  rep.axis_image_alignment = dot(axis, A * axis);
  rep.scalar_holds =
      rep.scalar <= scaled_band(tol.psd_tol, A.frobenius_norm() * A.frobenius_norm() *
                                                 Qinv.frobenius_norm());

  std::vector<Vector> pts;
  Vector e(n, 0.0);
  e[n - 1] = 1.0;
  const Vector apex_dir = C.cone().T * e;
  pts.push_back(apex_dir);
  Rng rng(seed);
  BoundarySample bs = sample_boundary(C, std::max<std::size_t>(samples, 1), rng, tol);
  for (const auto& x : bs.points) {
    pts.push_back(x);
    Vector blend(n);
    for (std::size_t k = 0; k < n; ++k) blend[k] = 0.5 * (x[k] + apex_dir[k]);
    pts.push_back(blend);  // interior point of the cone
  }

  double worst = std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  double max_norm = 1.0;
  std::optional<Vector> argmin;
  for (const auto& x : pts) {
    const double t = dot(axis, A * x);
    if (t < worst) {
      worst = t;
      argmin = x;
    }
    best = std::max(best, t);
    max_norm = std::max(max_norm, norm2(x));
  }
  const double band = scaled_band(tol.psd_tol, A.frobenius_norm() * max_norm);
  rep.worst_sample = worst;
  rep.sampled_holds = worst >= -band;
  rep.mirrored = !rep.sampled_holds && best <= band;
  if (!rep.sampled_holds) rep.violating_sample = argmin;
  rep.consistent = rep.scalar_holds == (rep.sampled_holds || rep.mirrored);
  return rep;
}

BoundaryFlowReport check_boundary_flow(const Matrix& A, const Matrix& Q, std::size_t K,
                                       const Tolerances& tol) {
  if (K < 2) throw ValidationError("check_boundary_flow: K must be at least 2");
  if (K > 120) throw OverflowError("check_boundary_flow: factorial weights overflow past K = 120");
  if (!A.is_square() || A.rows() != Q.rows() || !Q.is_square())
    throw DimensionMismatchError("check_boundary_flow: A and Q must be n x n");

  std::vector<Matrix> pow;
  pow.push_back(Matrix::identity(A.rows()));
  for (std::size_t k = 1; k < K; ++k) {
    pow.push_back(pow.back() * A);
    if (!pow.back().all_finite() || pow.back().max_abs() > 1e150)
      throw OverflowError("check_boundary_flow: powers of A overflow");
  }
  std::vector<double> fact(K, 1.0);
  for (std::size_t k = 1; k < K; ++k) fact[k] = fact[k - 1] * static_cast<double>(k);

  BoundaryFlowReport rep;
  rep.boundary_preserving = true;
  double scale = 1.0 + A.frobenius_norm();
  for (std::size_t k = 2; k <= K; ++k) {
    Matrix Qt(A.rows(), A.rows());
    for (std::size_t i = 0; i < k; ++i) {
      const double w = 1.0 / (fact[i] * fact[k - 1 - i]);
      Qt = Qt + (pow[i].transposed() * (Q * pow[k - 1 - i])) * w;
    }
    rep.residuals.push_back(Qt.max_abs());
    const double band = tol.psd_tol * (1.0 + Q.frobenius_norm()) * scale;
    if (rep.residuals.back() > band) rep.boundary_preserving = false;
    scale *= 1.0 + A.frobenius_norm();
  }
  return rep;
}

// ---- certificate re-verification and dispatch --------------------------

std::vector<std::string> verify_certificate(const Matrix& A, const SetDescription& set,
                                            bool discrete, const Certificate& cert,
                                            const Tolerances& tol) {
  std::vector<std::string> out;
  auto fail = [&out](std::string msg) { out.push_back(std::move(msg)); };

  switch (cert.kind) {
    case Certificate::Kind::None:
      fail("no certificate attached");
      return out;

    case Certificate::Kind::NonnegMatrix: {
      if (!set.is_h_family()) {
        fail("nonnegative-matrix certificate needs an H-representation");
        return out;
      }
      const Matrix& G = set.G();
      const Vector& b = set.b();
      const Matrix& H = cert.M;
      if (H.rows() != G.rows() || H.cols() != G.rows()) {
        fail("certificate matrix has wrong shape");
        return out;
      }
      for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j)
          if (H(i, j) < -tol.lp_tol) fail("H has a negative entry at (" + std::to_string(i) +
                                          "," + std::to_string(j) + ")");
      const Matrix GA = G * A;
      const Matrix R = H * G - GA;
      const double eq_band = scaled_band(tol.lp_tol, GA.max_abs() + H.max_abs());
      if (R.max_abs() > eq_band) fail("H G != G A (residual " + fmt(R.max_abs()) + ")");
      const double b_band = scaled_band(tol.lp_tol, max_abs(b) * (1.0 + H.max_abs()));
      for (std::size_t i = 0; i < H.rows(); ++i)
        if (dot(H.row(i), b) > b[i] + b_band)
          fail("(H b)_" + std::to_string(i) + " exceeds b_" + std::to_string(i));
      return out;
    }

    case Certificate::Kind::ODNonnegMatrix: {
      const Matrix& H = cert.M;
      for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j)
          if (i != j && H(i, j) < -tol.lp_tol)
            fail("off-diagonal entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") is negative");
      if (set.is_h_family()) {
        const Matrix& G = set.G();
        const Vector& b = set.b();
        if (H.rows() != G.rows() || H.cols() != G.rows()) {
          fail("certificate matrix has wrong shape");
          return out;
        }
        const Matrix GA = G * A;
        const Matrix R = H * G - GA;
        if (R.max_abs() > scaled_band(tol.lp_tol, GA.max_abs() + H.max_abs()))
          fail("H G != G A (residual " + fmt(R.max_abs()) + ")");
        const double b_band = scaled_band(tol.lp_tol, max_abs(b) * (1.0 + H.max_abs()));
        for (std::size_t i = 0; i < H.rows(); ++i)
          if (dot(H.row(i), b) > b_band)
            fail("(H b)_" + std::to_string(i) + " is positive");
        return out;
      }
      if (set.is_v_family()) {
        const std::size_t l1 = set.vertices().size();
        const std::size_t l2 = set.rays().size();
        if (H.rows() != l1 + l2 || H.cols() != l1 + l2) {
          fail("certificate matrix has wrong shape");
          return out;
        }
        std::vector<Vector> gens = set.vertices();
        gens.insert(gens.end(), set.rays().begin(), set.rays().end());
        const Matrix X = Matrix::from_columns(gens);
        const Matrix R = X * H - A * X;
        if (R.max_abs() > scaled_band(tol.lp_tol, X.max_abs() * (1.0 + H.max_abs())))
          fail("X L != A X (residual " + fmt(R.max_abs()) + ")");
        const double band = scaled_band(tol.lp_tol, H.max_abs());
        for (std::size_t c = 0; c < l1; ++c) {
          double s = 0.0;
          for (std::size_t p = 0; p < l1; ++p) s += H(p, c);
          if (std::fabs(s) > band)
            fail("vertex column " + std::to_string(c) + " weights sum to " + fmt(s) +
                 ", expected 0");
        }
        for (std::size_t c = l1; c < l1 + l2; ++c)
          for (std::size_t p = 0; p < l1; ++p)
            if (std::fabs(H(p, c)) > tol.lp_tol)
              fail("ray column " + std::to_string(c - l1) + " has a vertex-block entry");
        return out;
      }
      fail("od-nonnegative certificate needs a polyhedral set");
      return out;
    }

    case Certificate::Kind::VRepMatrix: {
      if (!set.is_v_family()) {
        fail("V-representation certificate needs a V-representation set");
        return out;
      }
      const Matrix& L = cert.M;
      const std::size_t l1 = set.vertices().size();
      const std::size_t l2 = set.rays().size();
      if (L.rows() != l1 + l2 || L.cols() != l1 + l2) {
        fail("certificate matrix has wrong shape");
        return out;
      }
      for (std::size_t i = 0; i < L.rows(); ++i)
        for (std::size_t j = 0; j < L.cols(); ++j)
          if (L(i, j) < -tol.lp_tol)
            fail("L has a negative entry at (" + std::to_string(i) + "," + std::to_string(j) +
                 ")");
      std::vector<Vector> gens = set.vertices();
      gens.insert(gens.end(), set.rays().begin(), set.rays().end());
      const Matrix X = Matrix::from_columns(gens);
      const Matrix R = X * L - A * X;
      if (R.max_abs() > scaled_band(tol.lp_tol, X.max_abs() * (1.0 + L.max_abs())))
        fail("X L != A X (residual " + fmt(R.max_abs()) + ")");
      const double band = scaled_band(tol.lp_tol, L.max_abs());
      for (std::size_t c = 0; c < l1; ++c) {
        double s = 0.0;
        for (std::size_t p = 0; p < l1; ++p) s += L(p, c);
        if (std::fabs(s - 1.0) > band)
          fail("vertex column " + std::to_string(c) + " weights sum to " + fmt(s) +
               ", expected 1");
      }
      for (std::size_t c = l1; c < l1 + l2; ++c)
        for (std::size_t p = 0; p < l1; ++p)
          if (std::fabs(L(p, c)) > tol.lp_tol)
            fail("ray column " + std::to_string(c - l1) + " has a vertex-block entry");
      return out;
    }

    case Certificate::Kind::ScalarLMI: {
      if (!set.is_quadratic_family()) {
        fail("scalar LMI certificate needs a quadratic-family set");
        return out;
      }
      const Matrix& Q = set.Q();
      if (cert.scalar_kind == "mu") {
        if (!discrete) {
          fail("mu certificate on a continuous problem");
          return out;
        }
        if (cert.scalar < -tol.psd_tol) fail("mu is negative");
        if ((set.kind() == SetKind::Ellipsoid || set.kind() == SetKind::QuadraticSet) &&
            cert.scalar > 1.0 + tol.psd_tol)
          fail("mu exceeds 1 for a sublevel-one set");
        const Matrix L = discrete_lmi(A, Q, cert.scalar);
        const double l1 = lambda1_of(L, tol);
        if (l1 > scaled_band(tol.psd_tol, L.frobenius_norm()))
          fail("A^T Q A - mu Q is not negative semidefinite (lambda_1 = " + fmt(l1) + ")");
        return out;
      }
      if (cert.scalar_kind == "eta") {
        if (discrete) {
          fail("eta certificate on a discrete problem");
          return out;
        }
        const Matrix L = continuous_lmi(A, Q, cert.scalar);
        const double l1 = lambda1_of(L, tol);
        if (l1 > scaled_band(tol.psd_tol, L.frobenius_norm()))
          fail("A^T Q + Q A - eta Q is not negative semidefinite (lambda_1 = " + fmt(l1) + ")");
        return out;
      }
      if (cert.scalar_kind == "nu") {
        if (!discrete || set.kind() != SetKind::Ellipsoid) {
          fail("nu certificate needs a discrete ellipsoid problem");
          return out;
        }
        if (cert.scalar < -tol.psd_tol || cert.scalar > 1.0 + tol.psd_tol)
          fail("nu outside [0, 1]");
        const std::size_t n = Q.rows();
        const Matrix Qinv = invert(Q, tol);
        Matrix B(2 * n, 2 * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            B(i, j) = Qinv(i, j);
            B(i, n + j) = A(i, j);
            B(n + i, j) = A(j, i);
            B(n + i, n + j) = cert.scalar * Q(i, j);
          }
        const double l1 = lambda1_of(-1.0 * B, tol);
        if (l1 > scaled_band(tol.psd_tol, B.frobenius_norm()))
          fail("the block matrix is not positive semidefinite at nu");
        return out;
      }
      fail("unknown scalar kind '" + cert.scalar_kind + "'");
      return out;
    }

    case Certificate::Kind::SufficientOnly: {
      if (!set.is_quadratic_family()) {
        fail("sufficient-only certificate needs a quadratic-family set");
        return out;
      }
      const Matrix M = A.transposed() * (set.Q() * A);
      const double l1 = lambda1_of(M, tol);
      if (l1 > scaled_band(tol.psd_tol, M.frobenius_norm()))
        fail("lambda_1(A^T Q A) = " + fmt(l1) + " is positive");
      return out;
    }
  }
  fail("unknown certificate kind");
  return out;
}

CheckReport run_check(const Problem& problem) {
  const Matrix& A = problem.A;
  const SetDescription& set = problem.set;
  const Tolerances& tol = problem.tol;
  if (problem.discrete) {
    switch (set.kind()) {
      case SetKind::HPolyhedron:
      case SetKind::HCone:
        return check_discrete_polyhedron(A, set, tol);
      case SetKind::VPolyhedron:
      case SetKind::VCone:
        return check_discrete_v_polyhedron(A, set, tol);
      case SetKind::Ellipsoid:
        return check_discrete_ellipsoid(A, set, tol);
      case SetKind::QuadraticSet:
        return check_discrete_quadratic(A, set, tol);
      case SetKind::DoubleCone:
        return check_discrete_double_cone(A, set, tol);
      case SetKind::LorenzCone:
        return check_discrete_lorenz(A, set, tol);
    }
  } else {
    switch (set.kind()) {
      case SetKind::HPolyhedron:
      case SetKind::HCone:
        return check_continuous_polyhedron(A, set, tol);
      case SetKind::VPolyhedron:
      case SetKind::VCone:
        return check_continuous_v_polyhedron(A, set, tol);
      case SetKind::Ellipsoid:
        return check_continuous_ellipsoid(A, set, tol);
      case SetKind::QuadraticSet:
        throw ValidationError("no decision procedure for continuous quadratic sets");
      case SetKind::DoubleCone:
        return check_continuous_double_cone(A, set, tol);
      case SetKind::LorenzCone:
        return check_continuous_lorenz(A, set, tol);
    }
  }
  throw ValidationError("unhandled problem kind");
}

}  // namespace invkit
