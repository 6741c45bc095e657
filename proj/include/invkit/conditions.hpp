#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invkit/matrix.hpp"
#include "invkit/numerics.hpp"
#include "invkit/problem.hpp"
#include "invkit/sets.hpp"
#include "invkit/tolerances.hpp"

namespace invkit {

enum class Verdict { Invariant, NotInvariant, Inconclusive };

std::string verdict_name(Verdict v);

// Proof object attached to an Invariant verdict. verify_certificate() checks
// each variant by direct substitution, independent of the solver that built
// it.
struct Certificate {
  enum class Kind {
    None,
    NonnegMatrix,    // H >= 0, H G = G A, H b <= b
    ODNonnegMatrix,  // off-diagonal >= 0 (diagonal free), defining relations per regime
    VRepMatrix,      // L >= 0, [X Xhat] L = A [X Xhat], vertex columns stochastic
    ScalarLMI,       // scalar mu/eta/nu with lambda_1 of the LMI at that value
    SufficientOnly,  // lambda_1(A^T Q A) <= 0 shortcut; no necessity claim
  };

  Kind kind = Kind::None;
  Matrix M;                  // matrix-valued certificates
  std::string scalar_kind;   // "mu" | "eta" | "nu" for ScalarLMI
  double scalar = 0.0;
  double lambda1 = 0.0;      // LMI top eigenvalue at scalar, or lambda_1(A^T Q A)
  std::vector<std::pair<std::string, double>> side_conditions;
};

std::string certificate_kind_name(Certificate::Kind kind);

// Refutation evidence: a concrete point x inside (or on) the set whose image
// A x (discrete step or flow direction) breaks the defining functional by
// `violation`.
struct Witness {
  Vector x;
  Vector image;
  double violation = 0.0;
  std::string note;
};

struct CheckReport {
  Verdict verdict = Verdict::Inconclusive;
  Certificate certificate;
  std::optional<Witness> witness;
  std::optional<std::size_t> failed_index;  // infeasible subproblem / generator
  std::vector<std::pair<std::string, std::string>> diagnostics;
  Tolerances tolerances;
  double elapsed_seconds = 0.0;
};

struct ScalarInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
};

// ---- polyhedral checkers ----------------------------------------------

// Row-wise LPs for a nonnegative H with H G = G A and H b <= b. Works for
// H-cones too (b = 0). NotInvariant carries the first infeasible row and an
// escape witness maximizing (G A)_i x over the set.
CheckReport check_discrete_polyhedron(const Matrix& A, const SetDescription& P,
                                      const Tolerances& tol = {});

// Same row decomposition with a free diagonal entry and H b <= 0; refutation
// witnesses come from facet LPs maximizing the outward flow component.
CheckReport check_continuous_polyhedron(const Matrix& A, const SetDescription& P,
                                        const Tolerances& tol = {});

// Column-wise LPs: each A x^i must be a convex-plus-conic combination of the
// generators (vertex weights summing to 1), each A ray a conic ray
// combination.
CheckReport check_discrete_v_polyhedron(const Matrix& A, const SetDescription& P,
                                        const Tolerances& tol = {});

// Column-wise tangent-cone LPs: vertex columns have vertex weights summing to
// zero, nonnegative except the own entry; ray columns are ray combinations
// with the own entry free.
CheckReport check_continuous_v_polyhedron(const Matrix& A, const SetDescription& P,
                                          const Tolerances& tol = {});

// ---- quadratic checkers -----------------------------------------------

// Closed form: mu_min = lambda_1(W A^T Q A W) with W the symmetric inverse
// square root of Q. Invariant iff mu_min <= 1 + band; refutation witness
// x = W v for the top eigenvector v.
CheckReport check_discrete_ellipsoid(const Matrix& A, const SetDescription& E,
                                     const Tolerances& tol = {});

// mu-free variant: definiteness(A^T Q A - Q); NotNegSemidefinite refutes,
// anything else certifies with mu = 1.
CheckReport check_discrete_ellipsoid_mufree(const Matrix& A, const SetDescription& E,
                                            const Tolerances& tol = {});

// Block-matrix variant: [[Q^{-1}, A], [A^T, nu Q]] >= 0 at
// nu = min(1, mu_min); must agree with the direct check.
CheckReport check_discrete_ellipsoid_schur(const Matrix& A, const SetDescription& E,
                                           const Tolerances& tol = {});

// General quadratic set {x^T Q x <= 1}, Q indefinite allowed: Invariant iff
// min over mu in [0,1] of lambda_1(A^T Q A - mu Q) <= band (ternary search on
// the convex minimand).
CheckReport check_discrete_quadratic(const Matrix& A, const SetDescription& S,
                                     const Tolerances& tol = {});

// Double cone {x^T Q x <= 0}: exists mu >= 0 with A^T Q A - mu Q <= 0,
// searched over the necessity interval.
CheckReport check_discrete_double_cone(const Matrix& A, const SetDescription& D,
                                       const Tolerances& tol = {},
                                       std::size_t witness_budget = 64);

// Lorenz cone: the double-cone LMI plus axis alignment u_n^T A u_n >= 0 and
// the dual half-space scalar u_n^T A Q^{-1} A^T u_n <= 0.
CheckReport check_discrete_lorenz(const Matrix& A, const SetDescription& C,
                                  const Tolerances& tol = {},
                                  std::size_t witness_budget = 64);

// Sufficient shortcut: lambda_1(A^T Q A) <= 0 alone certifies invariance
// (useful only for singular A). nullopt when not applicable; never refutes.
std::optional<CheckReport> check_discrete_lorenz_sufficient(const Matrix& A,
                                                            const SetDescription& C,
                                                            const Tolerances& tol = {});

// Lyapunov test: definiteness(A^T Q + Q A). Marginal is the one Inconclusive
// source among the ellipsoid checks.
CheckReport check_continuous_ellipsoid(const Matrix& A, const SetDescription& E,
                                       const Tolerances& tol = {});

// exists eta in R with A^T Q + Q A - eta Q <= 0 over the necessity interval;
// the reported eta* is the largest feasible value.
CheckReport check_continuous_double_cone(const Matrix& A, const SetDescription& D,
                                         const Tolerances& tol = {},
                                         std::size_t witness_budget = 64);

// Same LMI decides the single cone: trajectories can only leave through the
// shared apex, an equilibrium.
CheckReport check_continuous_lorenz(const Matrix& A, const SetDescription& C,
                                    const Tolerances& tol = {},
                                    std::size_t witness_budget = 64);

// ---- scalar diagnostics -----------------------------------------------

enum class IntervalMode { Full, Simple };

// Necessity bounds for mu in the discrete cone LMI:
//   full:   max{0, max_{i<n} q_i/lambda_i} <= mu <= q_n/lambda_n
//   simple: 0 <= mu <= q_n/lambda_n
// with q_i = u_i^T A^T Q A u_i. Empty means the LMI is infeasible.
ScalarInterval mu_interval(const Matrix& A, const SetDescription& C, IntervalMode mode,
                           const Tolerances& tol = {});

// Necessity bounds for eta in the continuous cone LMI:
//   max_{i<n} u_i^T(A^T+A)u_i <= eta <= u_n^T(A^T+A)u_n.
ScalarInterval eta_interval(const Matrix& A, const SetDescription& C,
                            const Tolerances& tol = {});

struct MuGeometryEntry {
  std::size_t index = 0;     // eigenvector index, 0-based
  double image_quad = 0.0;   // (A u_i)^T Q (A u_i)
  std::string placement;     // "interior" | "boundary" | "outside"
};

// Placement of each eigenvector image relative to the double cone, plus the
// mu conclusion it implies. Diagnostic only; never overrides the LMI checks.
struct MuGeometryReport {
  std::vector<MuGeometryEntry> entries;
  ScalarInterval interval;
  std::string conclusion;
};

MuGeometryReport classify_mu_geometry(const Matrix& A, const SetDescription& C,
                                      const Tolerances& tol = {});

// Scalar condition u_n^T A Q^{-1} A^T u_n <= 0 versus the sampled statement
// u_n^T A x >= 0 on the cone. `mirrored` flags the sign subtlety where the
// samples satisfy the reversed inequality (the condition holds for (A, -u_n)).
struct DualHalfspaceReport {
  double scalar = 0.0;
  double axis_image_alignment = 0.0;  // u_n^T A u_n
  bool scalar_holds = false;
  bool sampled_holds = false;
  bool mirrored = false;
  bool consistent = false;  // scalar_holds == (sampled_holds || mirrored)
  double worst_sample = 0.0;
  std::optional<Vector> violating_sample;
};

DualHalfspaceReport check_dual_halfspace(const Matrix& A, const SetDescription& C,
                                         std::size_t samples, std::uint64_t seed,
                                         const Tolerances& tol = {});

// Residuals of Qtilde_{k-1} = sum_{i=0}^{k-1} (A^i)^T Q A^{k-1-i} / (i!(k-1-i)!)
// for k = 2..K; all zero iff solutions starting on the boundary stay on it.
// The k = 2 term is the Lyapunov operator A^T Q + Q A.
struct BoundaryFlowReport {
  bool boundary_preserving = false;
  std::vector<double> residuals;  // residuals[k-2] = ||Qtilde_{k-1}||_max
};

BoundaryFlowReport check_boundary_flow(const Matrix& A, const Matrix& Q, std::size_t K,
                                       const Tolerances& tol = {});

// ---- scalar LMI helpers (shared by checkers and tests) -----------------

Matrix discrete_lmi(const Matrix& A, const Matrix& Q, double mu);    // A^T Q A - mu Q
Matrix continuous_lmi(const Matrix& A, const Matrix& Q, double eta); // A^T Q + Q A - eta Q

// Closed-form mu_min = lambda_1(W A^T Q A W), W = Q^{-1/2}. Requires Q > 0.
double discrete_mu_min(const Matrix& A, const Matrix& Q, const Tolerances& tol = {});

// Smallest mu >= 0 with A^T Q A - mu Q <= 0, by bisection on the monotone
// map mu -> lambda_1 (Q > 0). Equals discrete_mu_min up to mu_search_tol.
double smallest_feasible_mu(const Matrix& A, const Matrix& Q, const Tolerances& tol = {});

// ---- certificate re-verification and dispatch --------------------------

// Re-checks a certificate against (A, set, regime) by substitution. Returns
// the list of violated relations; empty means the certificate stands.
std::vector<std::string> verify_certificate(const Matrix& A, const SetDescription& set,
                                            bool discrete, const Certificate& cert,
                                            const Tolerances& tol = {});

// Routes a problem to the checker matching its set kind and time regime.
// Throws ValidationError for combinations without a decision procedure
// (continuous general quadratic sets).
CheckReport run_check(const Problem& problem);

}  // namespace invkit
