#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "invkit/matrix.hpp"
#include "invkit/numerics.hpp"
#include "invkit/rng.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

enum class SetKind {
  HPolyhedron,   // { x : G x <= b }
  HCone,         // { x : G x <= 0 }
  VPolyhedron,   // conv(vertices) + cone(rays)
  VCone,         // cone(rays)
  Ellipsoid,     // { x : x^T Q x <= 1 }, Q > 0
  LorenzCone,    // { x : x^T Q x <= 0, axis^T x >= 0 }, inertia(Q) = (n-1,0,1)
  QuadraticSet,  // { x : x^T Q x <= 1 }, Q symmetric, any inertia
  DoubleCone,    // { x : x^T Q x <= 0 }, inertia(Q) = (n-1,0,1)
};

std::string set_kind_name(SetKind kind);

// Spectral scaffolding shared by the cone kinds. axis is the eigenvector of
// the single negative eigenvalue, sign-normalized by sym_eig; the cone is the
// component containing +axis. T maps the standard cone onto this one:
// T^T Q T = diag(1, ..., 1, -1).
struct ConeBasis {
  SymEig eig;
  Vector axis;
  Matrix T;
  Matrix T_inv;
};

class SetDescription {
 public:
  // Empty (dimension 0) description; validate() rejects it. Exists so that
  // aggregates holding a set stay default-constructible.
  SetDescription() = default;

  static SetDescription h_polyhedron(Matrix G, Vector b);
  static SetDescription h_cone(Matrix G);
  static SetDescription v_polyhedron(std::vector<Vector> vertices, std::vector<Vector> rays);
  static SetDescription v_cone(std::vector<Vector> rays);
  static SetDescription ellipsoid(Matrix Q);
  static SetDescription quadratic_set(Matrix Q);
  // Throw WrongInertiaError unless inertia(Q) = (n-1, 0, 1).
  static SetDescription lorenz_cone(Matrix Q, const Tolerances& tol = {});
  static SetDescription double_cone(Matrix Q, const Tolerances& tol = {});

  SetKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  bool is_h_family() const { return kind_ == SetKind::HPolyhedron || kind_ == SetKind::HCone; }
  bool is_v_family() const { return kind_ == SetKind::VPolyhedron || kind_ == SetKind::VCone; }
  bool is_quadratic_family() const {
    return kind_ == SetKind::Ellipsoid || kind_ == SetKind::QuadraticSet ||
           kind_ == SetKind::LorenzCone || kind_ == SetKind::DoubleCone;
  }
  bool is_cone_kind() const {
    return kind_ == SetKind::LorenzCone || kind_ == SetKind::DoubleCone;
  }

  const Matrix& G() const { return G_; }
  const Vector& b() const { return b_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const std::vector<Vector>& rays() const { return rays_; }
  const Matrix& Q() const { return Q_; }
  const ConeBasis& cone() const;  // LorenzCone / DoubleCone only

  // Generator matrices (columns = generators); empty when none.
  Matrix vertex_matrix() const { return Matrix::from_columns(vertices_); }
  Matrix ray_matrix() const { return Matrix::from_columns(rays_); }

 private:
  SetKind kind_ = SetKind::HPolyhedron;
  std::size_t dim_ = 0;
  Matrix G_;
  Vector b_;
  std::vector<Vector> vertices_;
  std::vector<Vector> rays_;
  Matrix Q_;
  std::optional<ConeBasis> cone_;
};

// Structural violations, empty when the description is usable: finiteness,
// shape consistency, zero rows/generators, Q symmetry and definiteness or
// inertia, H-polyhedron nonemptiness. Never throws for content problems.
std::vector<std::string> validate(const SetDescription& set, const Tolerances& tol = {});

enum class Membership { Inside, Boundary, Outside };

std::string membership_name(Membership m);

// slack is a signed proxy in the set's defining functional: positive inside,
// about zero on the boundary, negative outside. H-rep: min row slack.
// Quadratic kinds: 1 - x^T Q x (cones: min(-x^T Q x, axis component)).
// V-rep: best barycentric depth, so Inside means the relative interior; for
// full-dimensional sets that matches the topological notion the H-rep uses.
struct MembershipReport {
  Membership cls = Membership::Outside;
  double slack = 0.0;
};

MembershipReport membership(const SetDescription& set, const Vector& x, double tol,
                            const Tolerances& num = {});

struct BoundarySample {
  std::vector<Vector> points;
  std::vector<std::size_t> skipped_facets;  // H-rep rows whose facet has no relative interior
};

// count points on the boundary, each verified to classify Boundary before it
// is returned. H-rep: per-facet LP points, then random supported points.
// V-rep: supporting-direction LP optima. Quadratic kinds: normalized Gaussian
// directions (cones through the standardizer). Throws DegenerateSetError when
// the boundary is empty or unreachable (e.g. whole-space quadratic set).
BoundarySample sample_boundary(const SetDescription& set, std::size_t count, Rng& rng,
                               const Tolerances& tol = {});

struct Standardization {
  Matrix T;
  Vector axis;
  Vector eigenvalues;
};

// Columns of T are u_i / sqrt(lambda_i), last u_n / sqrt(-lambda_n), so that
// T^T Q T = diag(1, ..., 1, -1). Throws WrongInertiaError unless
// inertia(Q) = (n-1, 0, 1).
Standardization lorenz_standardize(const Matrix& Q, const Tolerances& tol = {});

// Bouligand tangent cone membership at a boundary point. Throws
// NotOnBoundaryError when x does not classify Boundary at tolerance tol.
// H-rep: G_i v <= tol over active rows. Quadratic kinds: v^T Q x <= tol
// (cone apex: membership of v). V-rep: LP feasibility of
// v = sum alpha_i (x^i - x) + sum beta_j ray^j with alpha, beta >= 0.
bool tangent_cone_contains(const SetDescription& set, const Vector& x, const Vector& v,
                           double tol, const Tolerances& num = {});

// Signed tangent violation used by the sampled flow checks: positive means v
// exits the tangent cone at x. V-rep values are an LP infeasibility proxy.
double tangent_violation(const SetDescription& set, const Vector& x, const Vector& v,
                         double tol, const Tolerances& num = {});

// A deterministic point well inside the set when one exists (origin for the
// quadratic kinds, slack-center LP for H-reps, generator average for V-reps).
// Used to blend interior samples for the oracle.
Vector anchor_point(const SetDescription& set, const Tolerances& tol = {});

}  // namespace invkit
