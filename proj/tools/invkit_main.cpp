#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "invkit/bridge.hpp"
#include "invkit/conditions.hpp"
#include "invkit/errors.hpp"
#include "invkit/json_io.hpp"
#include "invkit/oracle.hpp"
#include "invkit/sets.hpp"

namespace {

using namespace invkit;

constexpr int kExitInvariant = 0;
constexpr int kExitNotInvariant = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitError = 3;

bool log_enabled() {
  const char* e = std::getenv("INVKIT_LOG");
  return e != nullptr && *e != '\0';
}

void logline(const std::string& s) {
  if (log_enabled()) std::cerr << "[invkit] " << s << "\n";
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Invariant: return kExitInvariant;
    case Verdict::NotInvariant: return kExitNotInvariant;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CommonOpts {
  std::string problem_path;
  std::string report_path;
  double tol_psd = -1.0;
  double tol_lp = -1.0;
  double tol_membership = -1.0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("problem", o.problem_path, "problem JSON file")->required();
  cmd->add_option("--report", o.report_path, "write a JSON report to this path");
  cmd->add_option("--tol-psd", o.tol_psd, "override the semidefiniteness tolerance");
  cmd->add_option("--tol-lp", o.tol_lp, "override the LP feasibility tolerance");
  cmd->add_option("--tol-membership", o.tol_membership, "override the membership tolerance");
  cmd->add_option("--seed", o.seed, "override the random seed");
}

Problem load_with_overrides(const CommonOpts& o) {
  Problem p = load_problem(o.problem_path);
  if (o.tol_psd >= 0.0) p.tol.psd_tol = o.tol_psd;
  if (o.tol_lp >= 0.0) p.tol.lp_tol = o.tol_lp;
  if (o.tol_membership >= 0.0) p.tol.membership_tol = o.tol_membership;
  if (o.seed >= 0) p.seed = static_cast<std::uint64_t>(o.seed);
  logline("loaded " + o.problem_path + ": n=" + std::to_string(p.set.dim()) +
          ", set=" + set_kind_name(p.set.kind()) +
          (p.discrete ? ", discrete" : ", continuous"));
  return p;
}

void print_report(const CheckReport& r) {
  std::cout << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.certificate.kind != Certificate::Kind::None) {
    std::cout << "certificate: " << certificate_kind_name(r.certificate.kind);
    if (r.certificate.kind == Certificate::Kind::ScalarLMI)
      std::cout << " (" << r.certificate.scalar_kind << " = " << fmt(r.certificate.scalar)
                << ", lambda1 = " << fmt(r.certificate.lambda1) << ")";
    std::cout << "\n";
  }
  if (r.failed_index.has_value())
    std::cout << "failed index: " << *r.failed_index << "\n";
  if (r.witness.has_value()) {
    std::cout << "witness point:";
    for (double v : r.witness->x) std::cout << " " << fmt(v);
    std::cout << "\nwitness violation: " << fmt(r.witness->violation) << " ("
              << r.witness->note << ")\n";
  }
  for (const auto& [k, v] : r.diagnostics) std::cout << k << ": " << v << "\n";
  std::cout << "elapsed: " << fmt(r.elapsed_seconds) << " s\n";
}

void maybe_write_report(const CommonOpts& o, const Problem& p, const CheckReport& r,
                        const std::string& command) {
  if (o.report_path.empty()) return;
  write_text_file(o.report_path, report_to_json_text(p, r, command));
  logline("report written to " + o.report_path);
}

int run_check_command(const CommonOpts& o) {
  const Problem p = load_with_overrides(o);
  const CheckReport r = run_check(p);
  print_report(r);
  maybe_write_report(o, p, r, "check");
  return verdict_exit(r.verdict);
}

int run_witness_command(const CommonOpts& o, std::size_t samples, std::size_t steps) {
  const Problem p = load_with_overrides(o);
  const FalsifyResult fr = falsify(p, samples, steps, p.seed);
  CheckReport r;
  r.tolerances = p.tol;
  r.diagnostics.emplace_back("samples_tried", std::to_string(fr.samples_tried));
  r.diagnostics.emplace_back("steps_per_sample", std::to_string(steps));
  if (fr.witness.has_value()) {
    r.verdict = Verdict::NotInvariant;
    r.witness = fr.witness;
    std::cout << "escape found (sample " << fr.sample_index << ", step " << fr.step_index
              << ")\n";
    print_report(r);
    maybe_write_report(o, p, r, "witness");
    return 1;
  }
  r.verdict = Verdict::Inconclusive;
  std::cout << "no escape found in " << fr.samples_tried << " trajectories of " << steps
            << " steps\n";
  maybe_write_report(o, p, r, "witness");
  return 0;
}

// Without an explicit start the most informative trajectory begins on the
// boundary; fall back to the anchor for sets we cannot sample.
Vector default_start(const Problem& p) {
  if (p.x0.has_value()) return *p.x0;
  try {
    Rng rng(p.seed);
    const BoundarySample bs = sample_boundary(p.set, 8, rng, p.tol);
    if (!bs.points.empty()) return bs.points.front();
  } catch (const DegenerateSetError&) {
  }
  return anchor_point(p.set, p.tol);
}

int run_simulate_command(const CommonOpts& o, std::size_t steps, double dt) {
  const Problem p = load_with_overrides(o);
  Vector x0 = default_start(p);
  if (!p.discrete && dt <= 0.0)
    dt = std::min(0.05, 0.1 / std::max(1e-8, p.A.frobenius_norm()));
  const Trajectory tr = simulate(p, x0, steps, dt);
  const std::string csv = trajectory_to_csv(tr);
  std::cout << csv;
  if (!o.report_path.empty()) write_text_file(o.report_path, csv);
  return 0;
}

int run_euler_command(const CommonOpts& o, const std::string& method_name, std::size_t grid,
                      double dt) {
  const Problem p = load_with_overrides(o);
  EulerMethod method;
  if (method_name == "forward")
    method = EulerMethod::Forward;
  else if (method_name == "backward")
    method = EulerMethod::Backward;
  else
    throw ValidationError("--method must be 'forward' or 'backward'");

  if (dt > 0.0) {
    Problem d = p;
    d.discrete = true;
    d.A = discretize(p.A, {method, dt}, p.tol);
    const CheckReport r = run_check(d);
    std::cout << euler_method_name(method) << " Euler at dt = " << fmt(dt) << "\n";
    print_report(r);
    maybe_write_report(o, d, r, "euler");
    return verdict_exit(r.verdict);
  }

  const EulerSweep sweep = max_preserving_dt(p, method, default_dt_grid(p.A, grid));
  std::cout << "dt sweep (" << euler_method_name(method) << " Euler, " << sweep.entries.size()
            << " grid steps)\n";
  for (const auto& e : sweep.entries)
    std::cout << "  dt = " << fmt(e.dt) << "  ->  " << verdict_name(e.verdict) << "\n";
  if (sweep.largest_passing_dt.has_value()) {
    std::cout << "largest passing dt on the grid: " << fmt(*sweep.largest_passing_dt) << "\n";
    return 0;
  }
  std::cout << "no grid dt preserves invariance\n";
  return 1;
}

int run_diagnose_command(const CommonOpts& o, std::size_t k_max, std::size_t samples) {
  const Problem p = load_with_overrides(o);
  std::cout << "system: n = " << p.set.dim() << ", "
            << (p.discrete ? "discrete" : "continuous") << " time\n";
  std::cout << "set: " << set_kind_name(p.set.kind()) << "\n";

  if (p.set.is_cone_kind()) {
    if (p.discrete) {
      const ScalarInterval iv = mu_interval(p.A, p.set, IntervalMode::Full, p.tol);
      const ScalarInterval ivs = mu_interval(p.A, p.set, IntervalMode::Simple, p.tol);
      std::cout << "mu interval (full): "
                << (iv.empty ? "empty" : "[" + fmt(iv.lo) + ", " + fmt(iv.hi) + "]") << "\n";
      std::cout << "mu interval (simple): "
                << (ivs.empty ? "empty" : "[" + fmt(ivs.lo) + ", " + fmt(ivs.hi) + "]") << "\n";
      const MuGeometryReport geo = classify_mu_geometry(p.A, p.set, p.tol);
      for (const auto& e : geo.entries)
        std::cout << "  eigenvector " << e.index << ": image quad = " << fmt(e.image_quad)
                  << " (" << e.placement << ")\n";
      std::cout << "classification: " << geo.conclusion << "\n";
    } else {
      const ScalarInterval iv = eta_interval(p.A, p.set, p.tol);
      std::cout << "eta interval: "
                << (iv.empty ? "empty" : "[" + fmt(iv.lo) + ", " + fmt(iv.hi) + "]") << "\n";
    }
    if (p.set.kind() == SetKind::LorenzCone) {
      const DualHalfspaceReport dh = check_dual_halfspace(p.A, p.set, samples, p.seed, p.tol);
      std::cout << "dual halfspace scalar: " << fmt(dh.scalar)
                << (dh.scalar_holds ? " (holds)" : " (violated)") << "\n";
      std::cout << "axis image alignment: " << fmt(dh.axis_image_alignment) << "\n";
      std::cout << "sampled halfspace: worst = " << fmt(dh.worst_sample)
                << (dh.sampled_holds ? " (holds)" : dh.mirrored ? " (mirrored)" : " (violated)")
                << "\n";
      std::cout << "scalar/sample agreement: " << (dh.consistent ? "consistent" : "INCONSISTENT")
                << "\n";
    }
  }
  if (p.set.is_quadratic_family() && k_max >= 2) {
    const BoundaryFlowReport bf = check_boundary_flow(p.A, p.set.Q(), k_max, p.tol);
    std::cout << "boundary flow residuals (k = 2.." << k_max << "):";
    for (double r : bf.residuals) std::cout << " " << fmt(r);
    std::cout << "\nboundary preserving: " << (bf.boundary_preserving ? "yes" : "no") << "\n";
  }
  if (!p.discrete) {
    try {
      const NagumoReport ng = nagumo_sample_check(p, samples, p.seed);
      std::cout << "sampled tangent check: worst violation = " << fmt(ng.worst_violation)
                << " over " << ng.samples_used << " boundary points\n";
    } catch (const DegenerateSetError& e) {
      std::cout << "sampled tangent check skipped: " << e.what() << "\n";
    }
  }

  const CheckReport r = run_check(p);
  std::cout << "\n";
  print_report(r);
  const CrossValidation cv = cross_validate(p, r, 32);
  for (const auto& n : cv.notes) std::cout << "cross-check: " << n << "\n";
  if (cv.contradiction) std::cout << "cross-check: CONTRADICTION\n";
  maybe_write_report(o, p, r, "diagnose");
  return cv.contradiction ? kExitError : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant set verification for linear dynamical systems"};
  app.require_subcommand(1);

  CommonOpts check_o, witness_o, simulate_o, euler_o, diagnose_o;
  std::size_t samples = 200, steps = 50;
  std::size_t sim_steps = 100;
  double sim_dt = 0.0;
  std::string method = "forward";
  std::size_t grid = 32;
  double euler_dt = 0.0;
  std::size_t k_max = 5, diag_samples = 64;

  CLI::App* check = app.add_subcommand("check", "decide invariance and emit a certificate");
  add_common(check, check_o);

  CLI::App* witness = app.add_subcommand("witness", "search for an escaping trajectory");
  add_common(witness, witness_o);
  witness->add_option("--samples", samples, "number of start points");
  witness->add_option("--steps", steps, "steps per trajectory");

  CLI::App* simulate = app.add_subcommand("simulate", "print a trajectory as CSV");
  add_common(simulate, simulate_o);
  simulate->add_option("--steps", sim_steps, "number of steps");
  simulate->add_option("--dt", sim_dt, "time step (continuous systems)");

  CLI::App* euler = app.add_subcommand("euler", "check invariance of Euler discretizations");
  add_common(euler, euler_o);
  euler->add_option("--method", method, "forward or backward")
      ->check(CLI::IsMember({"forward", "backward"}));
  euler->add_option("--grid", grid, "number of grid steps for the sweep");
  euler->add_option("--dt", euler_dt, "check a single step size instead of sweeping");

  CLI::App* diagnose = app.add_subcommand("diagnose", "print interval, geometry and flow diagnostics");
  add_common(diagnose, diagnose_o);
  diagnose->add_option("--k-max", k_max, "highest power in the boundary flow residuals");
  diagnose->add_option("--samples", diag_samples, "boundary samples for the sampled checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (check->parsed()) return run_check_command(check_o);
    if (witness->parsed()) return run_witness_command(witness_o, samples, steps);
    if (simulate->parsed()) return run_simulate_command(simulate_o, sim_steps, sim_dt);
    if (euler->parsed()) return run_euler_command(euler_o, method, grid, euler_dt);
    if (diagnose->parsed()) return run_diagnose_command(diagnose_o, k_max, diag_samples);
  } catch (const InvkitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
