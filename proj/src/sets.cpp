#include "invkit/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invkit/errors.hpp"
#include "invkit/lp.hpp"

namespace invkit {

namespace {

bool is_zero_row(const Matrix& M, std::size_t i) {
  for (std::size_t j = 0; j < M.cols(); ++j)
    if (M(i, j) != 0.0) return false;
  return true;
}

std::optional<ConeBasis> try_cone_basis(const Matrix& Q, const Tolerances& tol) {
  try {
    Standardization s = lorenz_standardize(Q, tol);
    ConeBasis basis;
    basis.eig = sym_eig(Q, tol);
    basis.axis = s.axis;
    basis.T = s.T;
    basis.T_inv = invert(s.T, tol);
    return basis;
  } catch (const InvkitError&) {
    return std::nullopt;
  }
}

double quad_value(const Matrix& Q, const Vector& x) {
  return dot(x, Q * x);
}

}  // namespace

std::string set_kind_name(SetKind kind) {
  switch (kind) {
    case SetKind::HPolyhedron: return "h_polyhedron";
    case SetKind::HCone: return "h_cone";
    case SetKind::VPolyhedron: return "v_polyhedron";
    case SetKind::VCone: return "v_cone";
    case SetKind::Ellipsoid: return "ellipsoid";
    case SetKind::LorenzCone: return "lorenz_cone";
    case SetKind::QuadraticSet: return "quadratic_set";
    case SetKind::DoubleCone: return "double_cone";
  }
  return "unknown";
}

std::string membership_name(Membership m) {
  switch (m) {
    case Membership::Inside: return "Inside";
    case Membership::Boundary: return "Boundary";
    case Membership::Outside: return "Outside";
  }
  return "unknown";
}

SetDescription SetDescription::h_polyhedron(Matrix G, Vector b) {
  SetDescription s;
  s.kind_ = SetKind::HPolyhedron;
  s.dim_ = G.cols();
  s.G_ = std::move(G);
  s.b_ = std::move(b);
  return s;
}

SetDescription SetDescription::h_cone(Matrix G) {
  SetDescription s;
  s.kind_ = SetKind::HCone;
  s.dim_ = G.cols();
  s.b_.assign(G.rows(), 0.0);
  s.G_ = std::move(G);
  return s;
}

SetDescription SetDescription::v_polyhedron(std::vector<Vector> vertices,
                                            std::vector<Vector> rays) {
  SetDescription s;
  s.kind_ = SetKind::VPolyhedron;
  s.dim_ = !vertices.empty() ? vertices.front().size()
                             : (!rays.empty() ? rays.front().size() : 0);
  s.vertices_ = std::move(vertices);
  s.rays_ = std::move(rays);
  return s;
}

SetDescription SetDescription::v_cone(std::vector<Vector> rays) {
  SetDescription s;
  s.kind_ = SetKind::VCone;
  s.dim_ = rays.empty() ? 0 : rays.front().size();
  s.rays_ = std::move(rays);
  return s;
}

SetDescription SetDescription::ellipsoid(Matrix Q) {
  SetDescription s;
  s.kind_ = SetKind::Ellipsoid;
  s.dim_ = Q.rows();
  s.Q_ = std::move(Q);
  return s;
}

SetDescription SetDescription::quadratic_set(Matrix Q) {
  SetDescription s;
  s.kind_ = SetKind::QuadraticSet;
  s.dim_ = Q.rows();
  s.Q_ = std::move(Q);
  return s;
}

SetDescription SetDescription::lorenz_cone(Matrix Q, const Tolerances& tol) {
  SetDescription s;
  s.kind_ = SetKind::LorenzCone;
  s.dim_ = Q.rows();
  s.cone_ = try_cone_basis(Q, tol);
  if (!s.cone_)
    throw WrongInertiaError("lorenz_cone: Q must be symmetric with inertia (n-1, 0, 1)");
  s.Q_ = std::move(Q);
  return s;
}

SetDescription SetDescription::double_cone(Matrix Q, const Tolerances& tol) {
  SetDescription s;
  s.kind_ = SetKind::DoubleCone;
  s.dim_ = Q.rows();
  s.cone_ = try_cone_basis(Q, tol);
  if (!s.cone_)
    throw WrongInertiaError("double_cone: Q must be symmetric with inertia (n-1, 0, 1)");
  s.Q_ = std::move(Q);
  return s;
}

const ConeBasis& SetDescription::cone() const {
  if (!cone_.has_value())
    throw WrongInertiaError("cone basis unavailable: Q is not a valid cone matrix");
  return *cone_;
}

std::vector<std::string> validate(const SetDescription& set, const Tolerances& tol) {
  std::vector<std::string> out;
  const std::size_t n = set.dim();
  if (n == 0) {
    out.push_back("set has dimension zero (no data)");
    return out;
  }

  if (set.is_h_family()) {
    const Matrix& G = set.G();
    if (G.rows() == 0) out.push_back("G has no rows");
    if (!G.all_finite()) out.push_back("G has non-finite entries");
    if (!all_finite(set.b())) out.push_back("b has non-finite entries");
    if (set.b().size() != G.rows()) out.push_back("b length does not match rows of G");
    for (std::size_t i = 0; i < G.rows(); ++i)
      if (is_zero_row(G, i)) out.push_back("row " + std::to_string(i) + " of G is zero");
    if (out.empty()) {
      LinearProgramFeas p;
      p.C = G;
      p.d = set.b();
      p.signs.assign(n, VarSign::Free);
      if (!solve_feasibility(p, tol).feasible) out.push_back("set is empty (G x <= b infeasible)");
    }
    return out;
  }

  if (set.is_v_family()) {
    if (set.vertices().empty() && set.rays().empty()) out.push_back("no generators");
    for (const auto& v : set.vertices()) {
      if (v.size() != n) out.push_back("vertex dimension mismatch");
      if (!all_finite(v)) out.push_back("vertex has non-finite entries");
    }
    for (const auto& r : set.rays()) {
      if (r.size() != n) out.push_back("ray dimension mismatch");
      if (!all_finite(r)) out.push_back("ray has non-finite entries");
      if (max_abs(r) == 0.0) out.push_back("zero ray generator");
    }
    return out;
  }

  const Matrix& Q = set.Q();
  if (!Q.is_square()) {
    out.push_back("Q is not square");
    return out;
  }
  if (!Q.all_finite()) {
    out.push_back("Q has non-finite entries");
    return out;
  }
  SymEig eig;
  try {
    eig = sym_eig(Q, tol);
  } catch (const NotSymmetricError&) {
    out.push_back("Q is not symmetric");
    return out;
  }
  const double band = scaled_band(tol.eig_tol, Q.frobenius_norm());
  if (set.kind() == SetKind::Ellipsoid) {
    if (eig.eigenvalues.back() <= band) out.push_back("Q is not positive definite");
  } else if (set.kind() == SetKind::QuadraticSet) {
    if (Q.max_abs() == 0.0) out.push_back("Q is zero");
  } else {
    Inertia sig;
    for (double l : eig.eigenvalues) {
      if (l > band)
        ++sig.positive;
      else if (l < -band)
        ++sig.negative;
      else
        ++sig.zero;
    }
    if (sig.positive != n - 1 || sig.zero != 0 || sig.negative != 1)
      out.push_back("inertia of Q is (" + std::to_string(sig.positive) + "," +
                    std::to_string(sig.zero) + "," + std::to_string(sig.negative) +
                    "), need (n-1,0,1)");
  }
  return out;
}

namespace {

// Max-min barycentric depth: maximize t subject to the generator
// representation of x with every weight >= t. t* > 0 characterizes the
// relative interior; t* = 0 the relative boundary.
OptimizeOutcome vrep_depth(const SetDescription& set, const Vector& x, const Tolerances& num) {
  const std::size_t l1 = set.vertices().size();
  const std::size_t l2 = set.rays().size();
  const std::size_t n = set.dim();
  const std::size_t nv = l1 + l2 + 1;  // weights + t

  LinearProgramFeas p;
  const std::size_t me = n + (l1 > 0 ? 1 : 0);
  p.E = Matrix(me, nv);
  p.f.assign(me, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < l1; ++i) p.E(r, i) = set.vertices()[i][r];
    for (std::size_t j = 0; j < l2; ++j) p.E(r, l1 + j) = set.rays()[j][r];
    p.f[r] = x[r];
  }
  if (l1 > 0) {
    for (std::size_t i = 0; i < l1; ++i) p.E(n, i) = 1.0;
    p.f[n] = 1.0;
  }
  p.C = Matrix(l1 + l2 + 1, nv);
  p.d.assign(l1 + l2 + 1, 0.0);
  for (std::size_t k = 0; k < l1 + l2; ++k) {
    p.C(k, k) = -1.0;
    p.C(k, l1 + l2) = 1.0;
  }
  p.C(l1 + l2, l1 + l2) = 1.0;  // t <= 1 keeps the program bounded
  p.d[l1 + l2] = 1.0;
  p.signs.assign(nv, VarSign::Nonnegative);
  p.signs[l1 + l2] = VarSign::Free;

  Vector obj(nv, 0.0);
  obj[l1 + l2] = 1.0;
  return optimize(p, obj, /*maximize=*/true, num);
}

MembershipReport classify_by_slack(double slack, double tol) {
  MembershipReport rep;
  rep.slack = slack;
  if (slack > tol)
    rep.cls = Membership::Inside;
  else if (slack < -tol)
    rep.cls = Membership::Outside;
  else
    rep.cls = Membership::Boundary;
  return rep;
}

}  // namespace

MembershipReport membership(const SetDescription& set, const Vector& x, double tol,
                            const Tolerances& num) {
  if (x.size() != set.dim()) throw DimensionMismatchError("membership: point dimension");

  if (set.is_h_family()) {
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.G().rows(); ++i)
      min_slack = std::min(min_slack, set.b()[i] - dot(set.G().row(i), x));
    return classify_by_slack(min_slack, tol);
  }

  if (set.is_v_family()) {
    const OptimizeOutcome res = vrep_depth(set, x, num);
    if (res.status == OptimizeOutcome::Status::Infeasible) {
      MembershipReport rep;
      rep.cls = Membership::Outside;
      rep.slack = -res.infeasibility;
      return rep;
    }
    const double depth = res.status == OptimizeOutcome::Status::Optimum ? res.value : 1.0;
    MembershipReport rep;
    rep.slack = depth;
    rep.cls = depth > tol ? Membership::Inside : Membership::Boundary;
    return rep;
  }

  const double q = quad_value(set.Q(), x);
  switch (set.kind()) {
    case SetKind::Ellipsoid:
    case SetKind::QuadraticSet:
      return classify_by_slack(1.0 - q, tol);
    case SetKind::DoubleCone:
      return classify_by_slack(-q, tol);
    case SetKind::LorenzCone: {
      const double h = dot(set.cone().axis, x);
      return classify_by_slack(std::min(-q, h), tol);
    }
    default:
      break;
  }
  throw InvkitError("membership: unhandled set kind");
}

Standardization lorenz_standardize(const Matrix& Q, const Tolerances& tol) {
  const SymEig eig = sym_eig(Q, tol);
  const std::size_t n = Q.rows();
  const double band = scaled_band(tol.eig_tol, Q.frobenius_norm());
  std::size_t pos = 0, neg = 0, zero = 0;
  for (double l : eig.eigenvalues) {
    if (l > band)
      ++pos;
    else if (l < -band)
      ++neg;
    else
      ++zero;
  }
  if (pos != n - 1 || neg != 1 || zero != 0)
    throw WrongInertiaError("lorenz_standardize: inertia must be (n-1, 0, 1)");

  Standardization s;
  s.eigenvalues = eig.eigenvalues;
  s.axis = eig.U.col(n - 1);
  s.T = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double l = eig.eigenvalues[j];
    const double scale = j + 1 < n ? 1.0 / std::sqrt(l) : 1.0 / std::sqrt(-l);
    for (std::size_t i = 0; i < n; ++i) s.T(i, j) = eig.U(i, j) * scale;
  }
  return s;
}

namespace {

// Relative-interior point of facet i: maximize the uniform slack of the other
// rows while pinned to the facet plane. t capped at 1 so unbounded facets
// still optimize.
OptimizeOutcome facet_interior(const Matrix& G, const Vector& b, std::size_t facet,
                               const Tolerances& num) {
  const std::size_t n = G.cols();
  const std::size_t m = G.rows();
  LinearProgramFeas p;
  p.E = Matrix(1, n + 1);
  for (std::size_t j = 0; j < n; ++j) p.E(0, j) = G(facet, j);
  p.f = {b[facet]};
  p.C = Matrix(m, n + 1);  // m-1 slack rows plus the t cap
  p.d.assign(m, 0.0);
  std::size_t r = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == facet) continue;
    for (std::size_t j = 0; j < n; ++j) p.C(r, j) = G(i, j);
    p.C(r, n) = 1.0;
    p.d[r] = b[i];
    ++r;
  }
  p.C(r, n) = 1.0;
  p.d[r] = 1.0;
  p.signs.assign(n + 1, VarSign::Free);
  Vector obj(n + 1, 0.0);
  obj[n] = 1.0;
  return optimize(p, obj, /*maximize=*/true, num);
}

// Random supported point on facet i: maximize a random objective pinned to
// the facet plane.
std::optional<Vector> facet_random_point(const Matrix& G, const Vector& b, std::size_t facet,
                                         Rng& rng, const Tolerances& num) {
  const std::size_t n = G.cols();
  LinearProgramFeas p;
  p.E = Matrix(1, n);
  for (std::size_t j = 0; j < n; ++j) p.E(0, j) = G(facet, j);
  p.f = {b[facet]};
  p.C = G;
  p.d = b;
  p.signs.assign(n, VarSign::Free);
  const Vector c = rng.gaussian_vector(n);
  const OptimizeOutcome res = optimize(p, c, /*maximize=*/true, num);
  if (res.status == OptimizeOutcome::Status::Infeasible) return std::nullopt;
  if (res.status == OptimizeOutcome::Status::Optimum) return res.z;
  // Unbounded: walk from the base point along the improving facet direction.
  const double tau = 1.0 + 3.0 * rng.uniform01();
  Vector x = res.z;
  for (std::size_t j = 0; j < n; ++j) x[j] += tau * res.ray[j];
  return x;
}

std::optional<Vector> vrep_supported_point(const SetDescription& set, Rng& rng,
                                           const Tolerances& num) {
  const std::size_t l1 = set.vertices().size();
  const std::size_t l2 = set.rays().size();
  const std::size_t n = set.dim();
  const Vector c = rng.gaussian_vector(n);

  LinearProgramFeas p;
  if (l1 > 0) {
    p.E = Matrix(1, l1 + l2);
    for (std::size_t i = 0; i < l1; ++i) p.E(0, i) = 1.0;
    p.f = {1.0};
  }
  p.signs.assign(l1 + l2, VarSign::Nonnegative);
  Vector obj(l1 + l2, 0.0);
  for (std::size_t i = 0; i < l1; ++i) obj[i] = dot(c, set.vertices()[i]);
  for (std::size_t j = 0; j < l2; ++j) obj[l1 + j] = dot(c, set.rays()[j]);

  const OptimizeOutcome res = optimize(p, obj, /*maximize=*/true, num);
  if (res.status == OptimizeOutcome::Status::Infeasible) return std::nullopt;

  auto map_point = [&](const Vector& w) {
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < l1; ++i)
      for (std::size_t r = 0; r < n; ++r) x[r] += w[i] * set.vertices()[i][r];
    for (std::size_t j = 0; j < l2; ++j)
      for (std::size_t r = 0; r < n; ++r) x[r] += w[l1 + j] * set.rays()[j][r];
    return x;
  };

  if (res.status == OptimizeOutcome::Status::Optimum) return map_point(res.z);
  // Unbounded: step along the recession direction the LP discovered.
  Vector base = map_point(res.z);
  Vector dir = map_point(res.ray);  // ray weights vanish on the vertex block
  const double len = norm2(dir);
  if (len < 1e-14) return std::nullopt;
  const double tau = (1.0 + 3.0 * rng.uniform01()) / len;
  for (std::size_t r = 0; r < n; ++r) base[r] += tau * dir[r];
  return base;
}

}  // namespace

BoundarySample sample_boundary(const SetDescription& set, std::size_t count, Rng& rng,
                               const Tolerances& tol) {
  BoundarySample out;
  if (count == 0) return out;
  const std::size_t n = set.dim();
  const double mtol = tol.membership_tol;

  auto keep_if_boundary = [&](const Vector& x) {
    if (!all_finite(x)) return false;
    if (membership(set, x, mtol, tol).cls != Membership::Boundary) return false;
    out.points.push_back(x);
    return true;
  };

  if (set.is_h_family()) {
    const Matrix& G = set.G();
    const std::size_t m = G.rows();
    const double degen_band = scaled_band(tol.lp_tol, max_abs(set.b()));
    std::vector<bool> usable(m, true);
    for (std::size_t i = 0; i < m && out.points.size() < count; ++i) {
      const OptimizeOutcome res = facet_interior(G, set.b(), i, tol);
      if (res.status != OptimizeOutcome::Status::Optimum || res.value <= degen_band) {
        usable[i] = false;
        out.skipped_facets.push_back(i);
        continue;
      }
      Vector x(res.z.begin(), res.z.begin() + static_cast<std::ptrdiff_t>(n));
      keep_if_boundary(x);
    }
    std::size_t attempts = 0;
    const std::size_t cap = 20 * count + 40;
    std::size_t facet = 0;
    while (out.points.size() < count && attempts < cap) {
      ++attempts;
      const std::size_t i = facet++ % m;
      if (!usable[i]) continue;
      const auto x = facet_random_point(G, set.b(), i, rng, tol);
      if (x.has_value()) keep_if_boundary(*x);
    }
    if (out.points.empty()) throw DegenerateSetError("sample_boundary: no facet has relative interior");
    return out;
  }

  if (set.is_v_family()) {
    std::size_t attempts = 0;
    const std::size_t cap = 20 * count + 40;
    while (out.points.size() < count && attempts < cap) {
      ++attempts;
      const auto x = vrep_supported_point(set, rng, tol);
      if (x.has_value()) keep_if_boundary(*x);
    }
    if (out.points.empty())
      throw DegenerateSetError("sample_boundary: no boundary point found (degenerate generators?)");
    return out;
  }

  // Quadratic kinds: direct construction from Gaussian directions.
  std::size_t attempts = 0;
  const std::size_t cap = 100 * count + 100;
  while (out.points.size() < count && attempts < cap) {
    ++attempts;
    if (set.kind() == SetKind::Ellipsoid || set.kind() == SetKind::QuadraticSet) {
      const Vector z = rng.gaussian_vector(n);
      const double q = quad_value(set.Q(), z);
      if (q <= 1e-12) continue;  // need the positive-value cone of Q
      keep_if_boundary((1.0 / std::sqrt(q)) * z);
    } else {
      const ConeBasis& basis = set.cone();
      Vector z(n, 0.0);
      double s2 = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        z[i] = rng.gaussian();
        s2 += z[i] * z[i];
      }
      z[n - 1] = std::sqrt(s2);
      Vector x = basis.T * z;
      if (set.kind() == SetKind::DoubleCone && rng.uniform01() < 0.5) x = -1.0 * x;
      keep_if_boundary(x);
    }
  }
  if (out.points.empty())
    throw DegenerateSetError("sample_boundary: boundary unreachable (set may be the whole space)");
  return out;
}

double tangent_violation(const SetDescription& set, const Vector& x, const Vector& v,
                         double tol, const Tolerances& num) {
  if (set.is_h_family()) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.G().rows(); ++i) {
      const Vector g = set.G().row(i);
      if (std::fabs(dot(g, x) - set.b()[i]) <= tol) worst = std::max(worst, dot(g, v));
    }
    return worst;
  }

  if (set.is_v_family()) {
    const std::size_t l1 = set.vertices().size();
    const std::size_t l2 = set.rays().size();
    const std::size_t n = set.dim();
    // Tangent cone at x: cone{vertex_i - x} + cone{ray_j}. A pure cone has no
    // vertex columns, so the backward-radial direction -x (legal: x is itself
    // a conic point) must be supplied explicitly.
    const std::size_t extra = l1 == 0 ? 1 : 0;
    LinearProgramFeas p;
    p.E = Matrix(n, l1 + l2 + extra);
    p.f = v;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < l1; ++i) p.E(r, i) = set.vertices()[i][r] - x[r];
      for (std::size_t j = 0; j < l2; ++j) p.E(r, l1 + j) = set.rays()[j][r];
      if (extra) p.E(r, l1 + l2) = -x[r];
    }
    p.signs.assign(l1 + l2 + extra, VarSign::Nonnegative);
    const FeasOutcome res = solve_feasibility(p, num);
    return res.feasible ? 0.0 : res.infeasibility;
  }

  const bool at_apex = set.is_cone_kind() && norm2(x) <= tol;
  if (at_apex) {
    if (set.kind() == SetKind::DoubleCone) return quad_value(set.Q(), v);
    const double q = quad_value(set.Q(), v);
    const double h = dot(set.cone().axis, v);
    return std::max(q, -h);
  }
  return dot(v, set.Q() * x);
}

bool tangent_cone_contains(const SetDescription& set, const Vector& x, const Vector& v,
                           double tol, const Tolerances& num) {
  if (membership(set, x, tol, num).cls != Membership::Boundary)
    throw NotOnBoundaryError("tangent_cone_contains: x is not a boundary point");
  if (set.is_v_family()) {
    return tangent_violation(set, x, v, tol, num) == 0.0;  // LP feasibility branch
  }
  if (set.kind() == SetKind::LorenzCone && norm2(x) <= tol)
    return membership(set, v, tol, num).cls != Membership::Outside;
  return tangent_violation(set, x, v, tol, num) <= tol;
}

Vector anchor_point(const SetDescription& set, const Tolerances& tol) {
  const std::size_t n = set.dim();
  if (set.is_quadratic_family()) {
    if (set.is_cone_kind()) {
      Vector e(n, 0.0);
      e[n - 1] = 1.0;
      return set.cone().T * e;  // unit point on the cone axis
    }
    return Vector(n, 0.0);
  }
  if (set.is_v_family()) {
    Vector c(n, 0.0);
    const auto& gens = set.vertices().empty() ? set.rays() : set.vertices();
    for (const auto& g : gens)
      for (std::size_t r = 0; r < n; ++r) c[r] += g[r] / static_cast<double>(gens.size());
    return c;
  }
  // H-rep: uniform slack center, capped so cones stay bounded.
  LinearProgramFeas p;
  const std::size_t m = set.G().rows();
  p.C = Matrix(m + 1, n + 1);
  p.d.assign(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.C(i, j) = set.G()(i, j);
    p.C(i, n) = 1.0;
    p.d[i] = set.b()[i];
  }
  p.C(m, n) = 1.0;
  p.d[m] = 1.0;
  p.signs.assign(n + 1, VarSign::Free);
  Vector obj(n + 1, 0.0);
  obj[n] = 1.0;
  const OptimizeOutcome res = optimize(p, obj, /*maximize=*/true, tol);
  if (res.status != OptimizeOutcome::Status::Optimum) return Vector(n, 0.0);
  return Vector(res.z.begin(), res.z.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace invkit
