#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "invkit/conditions.hpp"
#include "invkit/errors.hpp"
#include "invkit/rng.hpp"
#include "invkit/sets.hpp"

using namespace invkit;

namespace {

SetDescription diamond() {
  return SetDescription::h_polyhedron(
      Matrix::from_rows({{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}), {1, 1, 1, 1});
}

SetDescription unit_square_h() {
  return SetDescription::h_polyhedron(
      Matrix::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), {1, 1, 1, 1});
}

SetDescription unit_square_v() {
  return SetDescription::v_polyhedron({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, {});
}

Matrix lorenz_q3() {
  Matrix Q = Matrix::identity(3);
  Q(2, 2) = -1.0;
  return Q;
}

Matrix random_spd(std::size_t n, Rng& rng) {
  Matrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = rng.gaussian();
  Matrix Q = B.transposed() * B;
  for (std::size_t i = 0; i < n; ++i) Q(i, i) += 0.1;
  return Q;
}

Matrix random_square(std::size_t n, Rng& rng) {
  Matrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = rng.gaussian();
  return A;
}

void expect_certificate_stands(const Matrix& A, const SetDescription& set, bool discrete,
                               const CheckReport& r) {
  REQUIRE(r.verdict == Verdict::Invariant);
  const auto violations = verify_certificate(A, set, discrete, r.certificate);
  CHECK_MESSAGE(violations.empty(),
                (violations.empty() ? "" : violations.front()));
}

void expect_replayable_discrete_witness(const Matrix& A, const SetDescription& set,
                                        const CheckReport& r) {
  REQUIRE(r.verdict == Verdict::NotInvariant);
  REQUIRE(r.witness.has_value());
  const Witness& w = *r.witness;
  const Tolerances tol;
  CHECK(membership(set, w.x, tol.membership_tol).cls != Membership::Outside);
  CHECK(membership(set, A * w.x, tol.membership_tol).cls == Membership::Outside);
}

}  // namespace

// ---- polyhedral, discrete -----------------------------------------------

TEST_CASE("contraction keeps the diamond invariant with a verifiable H") {
  const Matrix A = Matrix::identity(2) * -1.0;
  const CheckReport r = check_discrete_polyhedron(A, diamond());
  expect_certificate_stands(A, diamond(), true, r);
  // H G = G A must hold essentially exactly.
  const Matrix& H = r.certificate.M;
  const Matrix resid = H * diamond().G() - diamond().G() * A;
  CHECK(resid.max_abs() < 1e-9);
}

TEST_CASE("doubling map escapes the square with a replayable witness") {
  const Matrix A = Matrix::identity(2) * 2.0;
  const CheckReport r = check_discrete_polyhedron(A, unit_square_h());
  expect_replayable_discrete_witness(A, unit_square_h(), r);
  CHECK(r.failed_index.has_value());
}

TEST_CASE("rotation by 90 degrees keeps the diamond invariant") {
  const Matrix A = Matrix::from_rows({{0, -1}, {1, 0}});
  const CheckReport r = check_discrete_polyhedron(A, diamond());
  expect_certificate_stands(A, diamond(), true, r);
}

TEST_CASE("h-cone invariance under a positive diagonal map") {
  // Cone x1 >= 0, x2 >= 0 (G = -I); any positive diagonal scaling keeps it.
  const SetDescription cone = SetDescription::h_cone(Matrix::identity(2) * -1.0);
  const Matrix A = Matrix::from_rows({{3, 0}, {0, 0.5}});
  const CheckReport r = check_discrete_polyhedron(A, cone);
  expect_certificate_stands(A, cone, true, r);

  // A rotation moves the cone off itself.
  const Matrix rot = Matrix::from_rows({{0, -1}, {1, 0}});
  const CheckReport r2 = check_discrete_polyhedron(rot, cone);
  CHECK(r2.verdict == Verdict::NotInvariant);
}

TEST_CASE("row scaling of G does not change the verdict") {
  Matrix G = diamond().G();
  Vector b = diamond().b();
  for (std::size_t j = 0; j < 2; ++j) G(0, j) *= 1e3;
  b[0] *= 1e3;
  const SetDescription scaled = SetDescription::h_polyhedron(G, b);
  const Matrix A = Matrix::from_rows({{0.9, 0.1}, {0, 0.8}});
  const CheckReport r1 = check_discrete_polyhedron(A, diamond());
  const CheckReport r2 = check_discrete_polyhedron(A, scaled);
  CHECK(r1.verdict == r2.verdict);
  CHECK(r1.verdict == Verdict::Invariant);
}

// ---- polyhedral, continuous ----------------------------------------------

TEST_CASE("inward flow certifies the diamond with the negative identity") {
  const Matrix A = Matrix::identity(2) * -1.0;
  const CheckReport r = check_continuous_polyhedron(A, diamond());
  expect_certificate_stands(A, diamond(), false, r);
  // The canonical certificate here is H = -I (row i maps to minus itself).
  const Matrix& H = r.certificate.M;
  const Matrix resid = H * diamond().G() - diamond().G() * A;
  CHECK(resid.max_abs() < 1e-9);
  const Vector hb = H * diamond().b();
  for (double v : hb) CHECK(v <= 1e-9);
}

TEST_CASE("outward flow on the square is refuted with a boundary witness") {
  // x' = x pushes every boundary point outward.
  const Matrix A = Matrix::identity(2);
  const CheckReport r = check_continuous_polyhedron(A, unit_square_h());
  REQUIRE(r.verdict == Verdict::NotInvariant);
  REQUIRE(r.witness.has_value());
  const Witness& w = *r.witness;
  // Witness lies on the boundary and its flow exits the tangent cone.
  const Tolerances tol;
  CHECK(membership(unit_square_h(), w.x, tol.membership_tol).cls == Membership::Boundary);
  CHECK(tangent_violation(unit_square_h(), w.x, A * w.x, tol.membership_tol) > 0.0);
}

TEST_CASE("shear flow along a facet keeps the square") {
  // x1' = -x1 + x2 stays inward on x1 = +-1; x2' = -x2 inward on x2 = +-1.
  const Matrix A = Matrix::from_rows({{-1, 1}, {0, -1}});
  const CheckReport r = check_continuous_polyhedron(A, unit_square_h());
  expect_certificate_stands(A, unit_square_h(), false, r);
}

// ---- polyhedral, v-representation ----------------------------------------

TEST_CASE("discrete v-polyhedron contraction certifies column-wise") {
  const Matrix A = Matrix::identity(2) * 0.5;
  const CheckReport r = check_discrete_v_polyhedron(A, unit_square_v());
  expect_certificate_stands(A, unit_square_v(), true, r);
}

TEST_CASE("discrete v-polyhedron doubling fails at a vertex with the vertex witness") {
  const Matrix A = Matrix::identity(2) * 2.0;
  const SetDescription sq = unit_square_v();
  const CheckReport r = check_discrete_v_polyhedron(A, sq);
  expect_replayable_discrete_witness(A, sq, r);
  REQUIRE(r.failed_index.has_value());
  // The witness is the failing vertex itself.
  CHECK(r.witness->x == sq.vertices()[*r.failed_index]);
}

TEST_CASE("v-cone ray rotation is refuted with a scaled ray witness") {
  const SetDescription cone = SetDescription::v_cone({{1, 0}, {0, 1}});
  const Matrix rot = Matrix::from_rows({{0, -1}, {1, 0}});
  const CheckReport r = check_discrete_v_polyhedron(rot, cone);
  REQUIRE(r.verdict == Verdict::NotInvariant);
  REQUIRE(r.witness.has_value());
  // Either a concrete escaping point or an honest direction-level note.
  if (r.witness->note.find("direction") == std::string::npos) {
    const Tolerances tol;
    CHECK(membership(cone, r.witness->x, tol.membership_tol).cls != Membership::Outside);
    CHECK(membership(cone, rot * r.witness->x, tol.membership_tol).cls ==
          Membership::Outside);
  }
}

TEST_CASE("v-cone invariance under its own generators") {
  const SetDescription cone = SetDescription::v_cone({{1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, 1}});
  const CheckReport r = check_discrete_v_polyhedron(Matrix::identity(3), cone);
  expect_certificate_stands(Matrix::identity(3), cone, true, r);
}

TEST_CASE("continuous v-polyhedron inward flow certifies") {
  const Matrix A = Matrix::identity(2) * -1.0;
  const CheckReport r = check_continuous_v_polyhedron(A, unit_square_v());
  expect_certificate_stands(A, unit_square_v(), false, r);
}

TEST_CASE("continuous v-polyhedron outward flow is refuted at a vertex") {
  const Matrix A = Matrix::identity(2);
  const CheckReport r = check_continuous_v_polyhedron(A, unit_square_v());
  REQUIRE(r.verdict == Verdict::NotInvariant);
  REQUIRE(r.failed_index.has_value());
  REQUIRE(r.witness.has_value());
}

// ---- ellipsoids, discrete -------------------------------------------------

TEST_CASE("rotation keeps the unit disk; contraction too; expansion does not") {
  const SetDescription disk = SetDescription::ellipsoid(Matrix::identity(2));

  const Matrix rot = Matrix::from_rows({{0, -1}, {1, 0}});
  const CheckReport r1 = check_discrete_ellipsoid(rot, disk);
  expect_certificate_stands(rot, disk, true, r1);
  CHECK(r1.certificate.scalar == doctest::Approx(1.0).epsilon(1e-9));

  const CheckReport r2 = check_discrete_ellipsoid(Matrix::identity(2) * 0.5, disk);
  expect_certificate_stands(Matrix::identity(2) * 0.5, disk, true, r2);
  CHECK(r2.certificate.scalar == doctest::Approx(0.25).epsilon(1e-9));

  const Matrix grow = Matrix::from_rows({{1.5, 0}, {0, 0.2}});
  const CheckReport r3 = check_discrete_ellipsoid(grow, disk);
  expect_replayable_discrete_witness(grow, disk, r3);
  // Worst direction is e1; the witness image has norm 1.5.
  CHECK(std::fabs(norm2(r3.witness->image) - 1.5) < 1e-8);
}

TEST_CASE("rank deficient map: mu_min reflects the active direction") {
  // A maps both axes onto e2 scaled: A = [[1,0],[1,0]] sends (x1,x2) to (x1,x1).
  const Matrix A = Matrix::from_rows({{1, 0}, {1, 0}});
  const SetDescription disk = SetDescription::ellipsoid(Matrix::identity(2));
  const CheckReport r = check_discrete_ellipsoid(A, disk);
  // x = e1 maps to (1,1) with squared norm 2 > 1. Refutations carry the
  // extremal growth through the witness: violation = mu_min - 1.
  REQUIRE(r.verdict == Verdict::NotInvariant);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->violation == doctest::Approx(1.0).epsilon(1e-9));
  expect_replayable_discrete_witness(A, disk, r);
}

TEST_CASE("three ellipsoid checkers agree on random stable and unstable maps") {
  Rng rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 3.0);
    const Matrix Q = random_spd(n, rng);
    Matrix A = random_square(n, rng);
    if (trial % 2 == 0) {
      // Scale down to force invariance roughly half the time.
      const double mu = discrete_mu_min(A, Q);
      A = A * (0.9 / std::sqrt(mu));
    }
    const SetDescription E = SetDescription::ellipsoid(Q);
    const Verdict v1 = check_discrete_ellipsoid(A, E).verdict;
    const Verdict v2 = check_discrete_ellipsoid_mufree(A, E).verdict;
    const Verdict v3 = check_discrete_ellipsoid_schur(A, E).verdict;
    CHECK(v1 == v3);
    // The mu-free variant may say Inconclusive on the margin; otherwise agree.
    if (v2 != Verdict::Inconclusive) CHECK(v1 == v2);
  }
}

TEST_CASE("bisection matches the closed form on random instances") {
  Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 5.0);
    const Matrix Q = random_spd(n, rng);
    const Matrix A = random_square(n, rng);
    const double closed = discrete_mu_min(A, Q);
    const double searched = smallest_feasible_mu(A, Q);
    CHECK(std::fabs(closed - searched) <= 1e-7);
  }
}

// ---- general quadratic sets ------------------------------------------------

TEST_CASE("quadratic set with definite Q behaves like the ellipsoid") {
  const SetDescription S = SetDescription::quadratic_set(Matrix::identity(2));
  const CheckReport r = check_discrete_quadratic(Matrix::identity(2) * 0.5, S);
  REQUIRE(r.verdict == Verdict::Invariant);
  // Minimand 0.25 - mu decreases on [0,1]; the search settles at mu = 1.
  CHECK(r.certificate.scalar == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.certificate.lambda1 == doctest::Approx(-0.75).epsilon(1e-6));
  expect_certificate_stands(Matrix::identity(2) * 0.5, S, true, r);
}

TEST_CASE("indefinite Q with the identity map certifies at mu = 1") {
  Matrix Q = Matrix::identity(2);
  Q(1, 1) = -1.0;
  const SetDescription S = SetDescription::quadratic_set(Q);
  const CheckReport r = check_discrete_quadratic(Matrix::identity(2), S);
  REQUIRE(r.verdict == Verdict::Invariant);
  CHECK(r.certificate.scalar == doctest::Approx(1.0).epsilon(1e-6));
  expect_certificate_stands(Matrix::identity(2), S, true, r);
}

TEST_CASE("hyperbolic quadratic set is kept by growth along the free direction") {
  // Q = diag(1,-1): {x1^2 - x2^2 <= 1}. A = [[1,0],[0,2]] gives
  // A^T Q A - mu Q = diag(1 - mu, mu - 4), nonpositive at mu = 1.
  Matrix Q = Matrix::identity(2);
  Q(1, 1) = -1.0;
  const SetDescription S = SetDescription::quadratic_set(Q);
  const Matrix A = Matrix::from_rows({{1, 0}, {0, 2}});
  const CheckReport r = check_discrete_quadratic(A, S);
  REQUIRE(r.verdict == Verdict::Invariant);
  expect_certificate_stands(A, S, true, r);
}

TEST_CASE("swapping the definite and free directions breaks the quadratic set") {
  Matrix Q = Matrix::identity(2);
  Q(1, 1) = -1.0;
  const SetDescription S = SetDescription::quadratic_set(Q);
  const Matrix swap = Matrix::from_rows({{0, 1}, {1, 0}});
  // x = (0, t) is inside for all t, but maps to (t, 0) with quad form t^2.
  const CheckReport r = check_discrete_quadratic(swap, S);
  CHECK(r.verdict == Verdict::NotInvariant);
}

// ---- double cones and Lorenz cones ----------------------------------------

TEST_CASE("axis flip keeps the double cone but breaks the Lorenz cone") {
  const Matrix A = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, -1}});
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());
  const SetDescription lc = SetDescription::lorenz_cone(lorenz_q3());

  const CheckReport rd = check_discrete_double_cone(A, dc);
  expect_certificate_stands(A, dc, true, rd);

  const CheckReport rl = check_discrete_lorenz(A, lc);
  REQUIRE(rl.verdict == Verdict::NotInvariant);
  REQUIRE(rl.witness.has_value());
  // The canonical witness is the axis point, flipped to the wrong half.
  CHECK(membership(lc, rl.witness->x, 1e-7).cls != Membership::Outside);
  CHECK(membership(lc, A * rl.witness->x, 1e-7).cls == Membership::Outside);
}

TEST_CASE("stable diagonal map keeps the Lorenz cone with an interior mu") {
  const Matrix A = Matrix::from_rows({{0.3, 0, 0}, {0, 0.3, 0}, {0, 0, 1.0}});
  const SetDescription lc = SetDescription::lorenz_cone(lorenz_q3());
  const CheckReport r = check_discrete_lorenz(A, lc);
  expect_certificate_stands(A, lc, true, r);
  const ScalarInterval iv = mu_interval(A, lc, IntervalMode::Simple);
  CHECK_FALSE(iv.empty);
  CHECK(r.certificate.scalar >= iv.lo - 1e-9);
  CHECK(r.certificate.scalar <= iv.hi + 1e-9);
}

TEST_CASE("outward diagonal map empties the mu interval and refutes") {
  const Matrix A = Matrix::from_rows({{2, 0, 0}, {0, 2, 0}, {0, 0, 0.5}});
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());
  const ScalarInterval iv = mu_interval(A, dc, IntervalMode::Full);
  CHECK(iv.empty);
  const CheckReport r = check_discrete_double_cone(A, dc);
  CHECK(r.verdict == Verdict::NotInvariant);
}

TEST_CASE("sufficient shortcut applies exactly when the image form is nonpositive") {
  const SetDescription lc = SetDescription::lorenz_cone(lorenz_q3());

  // A = e3 e3^T: A^T Q A = diag(0,0,-1) <= 0.
  Matrix A(3, 3);
  A(2, 2) = 1.0;
  const auto r = check_discrete_lorenz_sufficient(A, lc);
  REQUIRE(r.has_value());
  CHECK(r->verdict == Verdict::Invariant);
  expect_certificate_stands(A, lc, true, *r);

  const auto zero = check_discrete_lorenz_sufficient(Matrix(3, 3), lc);
  REQUIRE(zero.has_value());
  CHECK(zero->verdict == Verdict::Invariant);

  // Identity: A^T Q A = Q has a positive eigenvalue, shortcut not applicable.
  CHECK_FALSE(check_discrete_lorenz_sufficient(Matrix::identity(3), lc).has_value());
}

// ---- continuous quadratic -------------------------------------------------

TEST_CASE("continuous ellipsoid check covers its three outcomes") {
  const SetDescription disk = SetDescription::ellipsoid(Matrix::identity(2));

  // Strictly stable flow.
  const CheckReport r1 = check_continuous_ellipsoid(Matrix::identity(2) * -1.0, disk);
  expect_certificate_stands(Matrix::identity(2) * -1.0, disk, false, r1);

  // Rotation: A^T + A = 0 exactly; at zero psd tolerance this certifies.
  Tolerances exact;
  exact.psd_tol = 0.0;
  const Matrix rot = Matrix::from_rows({{0, -1}, {1, 0}});
  const CheckReport r2 = check_continuous_ellipsoid(rot, disk, exact);
  CHECK(r2.verdict == Verdict::Invariant);
  CHECK(std::fabs(r2.certificate.lambda1) <= 1e-10);

  // Expanding flow with a boundary witness whose outward derivative is positive.
  const CheckReport r3 = check_continuous_ellipsoid(Matrix::identity(2), disk);
  REQUIRE(r3.verdict == Verdict::NotInvariant);
  REQUIRE(r3.witness.has_value());
  CHECK(r3.witness->violation > 0.0);
  CHECK(std::fabs(dot(r3.witness->x, r3.witness->x) - 1.0) < 1e-8);
}

TEST_CASE("spiral-out flow on the cone certifies with the largest feasible eta") {
  // A = [[1,-1,0],[1,1,0],[0,0,1]]: A^T + A = 2I, so the LMI at eta = 2 is
  // exactly zero and eta* = 2.
  const Matrix A = Matrix::from_rows({{1, -1, 0}, {1, 1, 0}, {0, 0, 1}});
  const SetDescription lc = SetDescription::lorenz_cone(lorenz_q3());
  const CheckReport r = check_continuous_lorenz(A, lc);
  REQUIRE(r.verdict == Verdict::Invariant);
  CHECK(r.certificate.scalar == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::fabs(r.certificate.lambda1) <= 1e-10);
  expect_certificate_stands(A, lc, false, r);
}

TEST_CASE("unequal growth rates empty the eta interval and refute the cone") {
  const Matrix A = Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());
  const ScalarInterval iv = eta_interval(A, dc);
  CHECK(iv.empty);
  CHECK(iv.lo == doctest::Approx(6.0));
  CHECK(iv.hi == doctest::Approx(2.0));
  const CheckReport r = check_continuous_double_cone(A, dc);
  CHECK(r.verdict == Verdict::NotInvariant);
}

// ---- scalar diagnostics -----------------------------------------------------

TEST_CASE("mu interval brackets the certified scalar on the stable cone map") {
  const Matrix A = Matrix::from_rows({{0.3, 0, 0}, {0, 0.3, 0}, {0, 0, 1.0}});
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());
  const ScalarInterval full = mu_interval(A, dc, IntervalMode::Full);
  const ScalarInterval simple = mu_interval(A, dc, IntervalMode::Simple);
  CHECK_FALSE(full.empty);
  CHECK_FALSE(simple.empty);
  CHECK(full.lo == doctest::Approx(0.09));
  CHECK(full.hi == doctest::Approx(1.0));
  CHECK(simple.lo == doctest::Approx(0.0));
  CHECK(full.lo >= simple.lo - 1e-12);
  CHECK(full.hi == doctest::Approx(simple.hi));
}

TEST_CASE("identity map pins the mu interval at exactly one") {
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());
  const ScalarInterval iv = mu_interval(Matrix::identity(3), dc, IntervalMode::Full);
  CHECK_FALSE(iv.empty);
  CHECK(iv.lo == doctest::Approx(1.0));
  CHECK(iv.hi == doctest::Approx(1.0));
}

TEST_CASE("geometry classification names the obstruction") {
  const SetDescription dc = SetDescription::double_cone(lorenz_q3());

  const Matrix out = Matrix::from_rows({{2, 0, 0}, {0, 2, 0}, {0, 0, 0.5}});
  const MuGeometryReport g1 = classify_mu_geometry(out, dc);
  CHECK(g1.interval.empty);
  CHECK(g1.conclusion.find("no feasible mu") != std::string::npos);

  const Matrix ok = Matrix::from_rows({{0.3, 0, 0}, {0, 0.3, 0}, {0, 0, 1.0}});
  const MuGeometryReport g2 = classify_mu_geometry(ok, dc);
  CHECK_FALSE(g2.interval.empty);
  CHECK(g2.entries.size() == 3);
  // The axis image (0,0,1) is interior to the cone, the others outside it.
  CHECK(g2.entries[2].placement == "interior");
}

TEST_CASE("dual halfspace report flags the mirrored configuration") {
  // Axis flip: u_n^T A x <= 0 on the cone (reversed sign) while the scalar
  // condition still holds.
  const Matrix flip = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, -1}});
  const SetDescription lc = SetDescription::lorenz_cone(lorenz_q3());
  const DualHalfspaceReport d1 = check_dual_halfspace(flip, lc, 64, 7);
  CHECK(d1.scalar_holds);
  CHECK_FALSE(d1.sampled_holds);
  CHECK(d1.mirrored);
  CHECK(d1.consistent);

  const DualHalfspaceReport d2 = check_dual_halfspace(Matrix::identity(3), lc, 64, 7);
  CHECK(d2.scalar_holds);
  CHECK(d2.sampled_holds);
  CHECK(d2.consistent);
}

TEST_CASE("boundary flow residuals vanish exactly for the rotation") {
  const Matrix rot = Matrix::from_rows({{0, -1}, {1, 0}});
  const BoundaryFlowReport r = check_boundary_flow(rot, Matrix::identity(2), 6);
  CHECK(r.boundary_preserving);
  for (double v : r.residuals) CHECK(std::fabs(v) <= 1e-12);

  const BoundaryFlowReport r2 = check_boundary_flow(Matrix::identity(2), Matrix::identity(2), 6);
  CHECK_FALSE(r2.boundary_preserving);
  CHECK(r2.residuals[0] == doctest::Approx(2.0));
}

// ---- certificate verification negative paths --------------------------------

TEST_CASE("verify_certificate rejects tampered certificates") {
  const Matrix A = Matrix::identity(2) * 0.5;
  const SetDescription disk = SetDescription::ellipsoid(Matrix::identity(2));
  CheckReport r = check_discrete_ellipsoid(A, disk);
  REQUIRE(r.verdict == Verdict::Invariant);

  Certificate bad = r.certificate;
  bad.scalar = 5.0;  // outside [0, 1]
  CHECK_FALSE(verify_certificate(A, disk, true, bad).empty());

  const CheckReport hp = check_discrete_polyhedron(Matrix::identity(2) * -1.0, diamond());
  Certificate badH = hp.certificate;
  badH.M(0, 0) = -1.0;
  CHECK_FALSE(verify_certificate(Matrix::identity(2) * -1.0, diamond(), true, badH).empty());

  const CheckReport vp = check_discrete_v_polyhedron(Matrix::identity(2) * 0.5, unit_square_v());
  Certificate badL = vp.certificate;
  badL.M(0, 0) += 0.5;  // breaks the reconstruction equation
  CHECK_FALSE(verify_certificate(Matrix::identity(2) * 0.5, unit_square_v(), true, badL).empty());
}

TEST_CASE("verify_certificate rejects regime mismatches") {
  const Matrix A = Matrix::identity(2) * -1.0;
  const SetDescription disk = SetDescription::ellipsoid(Matrix::identity(2));
  const CheckReport r = check_continuous_ellipsoid(A, disk);
  REQUIRE(r.verdict == Verdict::Invariant);
  // An eta certificate presented as a discrete proof must fail.
  CHECK_FALSE(verify_certificate(A, disk, true, r.certificate).empty());
}

// ---- dispatch ---------------------------------------------------------------

TEST_CASE("run_check routes by set kind and regime") {
  Problem p;
  p.A = Matrix::identity(2) * 0.5;
  p.discrete = true;
  p.set = SetDescription::ellipsoid(Matrix::identity(2));
  CHECK(run_check(p).verdict == Verdict::Invariant);

  p.set = diamond();
  CHECK(run_check(p).verdict == Verdict::Invariant);

  p.discrete = false;
  p.A = Matrix::identity(2) * -1.0;
  p.set = unit_square_v();
  CHECK(run_check(p).verdict == Verdict::Invariant);

  // No decision procedure for continuous general quadratic sets.
  Matrix ind = Matrix::identity(2);
  ind(1, 1) = -1.0;
  p.set = SetDescription::quadratic_set(ind);
  CHECK_THROWS_AS(run_check(p), ValidationError);
}
