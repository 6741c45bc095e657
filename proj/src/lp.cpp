#include "invkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "invkit/errors.hpp"

namespace invkit {

namespace {

// Dense two-phase tableau simplex on min c^T w s.t. M w = r, w >= 0 with
// r >= 0. Bland's rule both phases (lowest eligible column enters; ratio ties
// break on lowest basic index), so runs are deterministic and cycle-free.
// Artificial columns never re-enter once they leave the basis.
class DenseSimplex {
 public:
  enum class Status { Optimal, Infeasible, Unbounded, Breakdown };

  struct Result {
    Status status = Status::Breakdown;
    Vector w;
    double value = 0.0;     // phase-2 objective at w
    Vector y;               // phase-1 multipliers when Infeasible
    Vector ray;             // improving ray when Unbounded
    double phase1 = 0.0;    // phase-1 optimum
  };

  // num_cols must be passed in: rows may be empty (an LP whose only
  // constraints are the variable signs), and the column count still matters.
  DenseSimplex(const std::vector<Vector>& rows, const Vector& rhs, std::size_t num_cols,
               const Tolerances& tol)
      : m_(rows.size()), n_(num_cols), tol_(tol) {
    tab_.assign(m_, Vector(n_ + m_ + 1, 0.0));
    double scale = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        tab_[i][j] = rows[i][j];
        scale = std::max(scale, std::fabs(rows[i][j]));
      }
      tab_[i][n_ + i] = 1.0;
      tab_[i].back() = rhs[i];
    }
    enter_tol_ = 1e-13 * (1.0 + scale);
    basis_.resize(m_);
    std::iota(basis_.begin(), basis_.end(), n_);
    blocked_.assign(n_ + m_, false);
  }

  Result run(const Vector* cost, double feas_tol) {
    Result res;

    // Phase 1: minimize the artificial sum. Reduced costs start as the
    // negated column sums (basis = artificials, each with unit cost).
    cr_.assign(n_ + m_ + 1, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j <= n_ + m_; ++j) cr_[j] -= tab_[i][j];
    for (std::size_t k = 0; k < m_; ++k) cr_[n_ + k] += 1.0;

    if (!iterate(/*phase1=*/true)) {
      res.status = Status::Breakdown;
      return res;
    }
    res.phase1 = -cr_.back();
    if (res.phase1 > feas_tol) {
      res.status = Status::Infeasible;
      res.y.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) res.y[i] = 1.0 - cr_[n_ + i];
      return res;
    }

    if (cost != nullptr) {
      drive_out_artificials();
      // Rebuild reduced costs from the real objective (artificials cost 0 and
      // are barred from entering).
      cr_.assign(n_ + m_ + 1, 0.0);
      for (std::size_t j = 0; j < n_; ++j) cr_[j] = (*cost)[j];
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = basis_[i] < n_ ? (*cost)[basis_[i]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= n_ + m_; ++j) cr_[j] -= cb * tab_[i][j];
      }
      if (!iterate(/*phase1=*/false)) {
        if (unbounded_col_ == npos) {
          res.status = Status::Breakdown;
          return res;
        }
        res.status = Status::Unbounded;
        res.w = extract();
        res.ray.assign(n_, 0.0);
        res.ray[unbounded_col_] = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
          if (basis_[i] < n_) res.ray[basis_[i]] = -tab_[i][unbounded_col_];
        return res;
      }
    }

    res.status = Status::Optimal;
    res.w = extract();
    if (cost != nullptr)
      res.value = std::inner_product(cost->begin(), cost->end(), res.w.begin(), 0.0);
    return res;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Vector extract() const {
    Vector w(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) w[basis_[i]] = tab_[i].back();
    return w;
  }

  // One Bland loop. Returns false on unbounded (phase 2, unbounded_col_ set)
  // or on the iteration cap (unbounded_col_ == npos).
  bool iterate(bool phase1) {
    unbounded_col_ = npos;
    const std::size_t cap = 20000 * (m_ + n_ + 1);
    for (std::size_t it = 0; it < cap; ++it) {
      std::size_t enter = npos;
      const std::size_t limit = phase1 ? n_ + m_ : n_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (blocked_[j]) continue;
        if (cr_[j] < -enter_tol_) {
          enter = j;
          break;
        }
      }
      if (enter == npos) return true;  // optimal

      std::size_t leave_row = npos;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = tab_[i][enter];
        if (a <= tol_.pivot_tol) continue;
        const double ratio = tab_[i].back() / a;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             (leave_row == npos || basis_[i] < basis_[leave_row]))) {
          best_ratio = ratio;
          leave_row = i;
        }
      }
      if (leave_row == npos) {
        if (phase1) return false;  // numerically impossible: objective >= 0
        unbounded_col_ = enter;
        return false;
      }
      pivot(leave_row, enter);
    }
    return false;  // cap reached
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t pc = npos;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::fabs(tab_[i][j]) > tol_.pivot_tol) {
          pc = j;
          break;
        }
      }
      // No structural pivot: the row is redundant; the artificial stays basic
      // at level ~0 and the row never wins a ratio test.
      if (pc != npos) pivot(i, pc);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t old = basis_[pr];
    if (old >= n_) blocked_[old] = true;  // artificial leaves for good
    const double piv = tab_[pr][pc];
    for (auto& v : tab_[pr]) v /= piv;
    tab_[pr][pc] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == pr) continue;
      const double f = tab_[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j) tab_[i][j] -= f * tab_[pr][j];
      tab_[i][pc] = 0.0;
    }
    const double fc = cr_[pc];
    if (fc != 0.0) {
      for (std::size_t j = 0; j <= n_ + m_; ++j) cr_[j] -= fc * tab_[pr][j];
      cr_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t m_, n_;
  Tolerances tol_;
  double enter_tol_;
  std::vector<Vector> tab_;
  Vector cr_;
  std::vector<std::size_t> basis_;
  std::vector<bool> blocked_;
  std::size_t unbounded_col_ = npos;
};

// Column bookkeeping for the standard-form reduction: free variables split
// into (plus, minus) pairs, one slack per inequality row, rows with negative
// rhs negated.
struct Reduction {
  std::vector<Vector> rows;
  Vector rhs;
  std::vector<bool> flipped;
  std::vector<std::size_t> plus_col;   // per variable
  std::vector<std::size_t> minus_col;  // npos when Nonnegative
  std::size_t num_cols = 0;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

Reduction reduce(const LinearProgramFeas& p) {
  const std::size_t n = p.num_vars();
  const std::size_t me = p.E.rows();
  const std::size_t mc = p.C.rows();
  if (me > 0 && p.E.cols() != n) throw DimensionMismatchError("solve_feasibility: E columns");
  if (mc > 0 && p.C.cols() != n) throw DimensionMismatchError("solve_feasibility: C columns");
  if (p.f.size() != me || p.d.size() != mc)
    throw DimensionMismatchError("solve_feasibility: rhs length");

  Reduction red;
  red.plus_col.resize(n);
  red.minus_col.assign(n, Reduction::npos);
  std::size_t col = 0;
  for (std::size_t v = 0; v < n; ++v) {
    red.plus_col[v] = col++;
    if (p.signs[v] == VarSign::Free) red.minus_col[v] = col++;
  }
  const std::size_t slack0 = col;
  red.num_cols = col + mc;

  red.rows.assign(me + mc, Vector(red.num_cols, 0.0));
  red.rhs.resize(me + mc);
  red.flipped.assign(me + mc, false);
  for (std::size_t i = 0; i < me + mc; ++i) {
    const bool eq = i < me;
    const std::size_t r = eq ? i : i - me;
    for (std::size_t v = 0; v < n; ++v) {
      const double a = eq ? p.E(r, v) : p.C(r, v);
      red.rows[i][red.plus_col[v]] = a;
      if (red.minus_col[v] != Reduction::npos) red.rows[i][red.minus_col[v]] = -a;
    }
    if (!eq) red.rows[i][slack0 + r] = 1.0;
    red.rhs[i] = eq ? p.f[r] : p.d[r];
    if (red.rhs[i] < 0.0) {
      red.flipped[i] = true;
      for (auto& a : red.rows[i]) a = -a;
      red.rhs[i] = -red.rhs[i];
    }
  }
  return red;
}

Vector recover_z(const Reduction& red, const Vector& w, std::size_t n) {
  Vector z(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    z[v] = w[red.plus_col[v]];
    if (red.minus_col[v] != Reduction::npos) z[v] -= w[red.minus_col[v]];
  }
  return z;
}

Vector recover_y(const Reduction& red, const Vector& y_core) {
  Vector y(y_core.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = red.flipped[i] ? -y_core[i] : y_core[i];
  return y;
}

}  // namespace

OptimizeOutcome optimize(const LinearProgramFeas& p, const Vector& obj, bool maximize,
                         const Tolerances& tol) {
  const std::size_t n = p.num_vars();
  if (obj.size() != n) throw DimensionMismatchError("optimize: objective length");
  Reduction red = reduce(p);

  Vector cost(red.num_cols, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const double c = maximize ? -obj[v] : obj[v];
    cost[red.plus_col[v]] = c;
    if (red.minus_col[v] != Reduction::npos) cost[red.minus_col[v]] = -c;
  }

  DenseSimplex simplex(red.rows, red.rhs, red.num_cols, tol);
  const double feas_tol = scaled_band(tol.lp_tol, max_abs(red.rhs));
  const auto res = simplex.run(&cost, feas_tol);

  OptimizeOutcome out;
  switch (res.status) {
    case DenseSimplex::Status::Infeasible:
      out.status = OptimizeOutcome::Status::Infeasible;
      out.y = recover_y(red, res.y);
      out.infeasibility = res.phase1;
      return out;
    case DenseSimplex::Status::Unbounded: {
      out.status = OptimizeOutcome::Status::Unbounded;
      out.z = recover_z(red, res.w, n);
      out.ray = recover_z(red, res.ray, n);
      return out;
    }
    case DenseSimplex::Status::Optimal: {
      out.status = OptimizeOutcome::Status::Optimum;
      out.z = recover_z(red, res.w, n);
      out.value = dot(obj, out.z);
      return out;
    }
    case DenseSimplex::Status::Breakdown:
      break;
  }
  throw NumericalBreakdownError("simplex: pivot breakdown or iteration cap");
}

FeasOutcome solve_feasibility(const LinearProgramFeas& p, const Tolerances& tol) {
  Reduction red = reduce(p);
  DenseSimplex simplex(red.rows, red.rhs, red.num_cols, tol);
  const double feas_tol = scaled_band(tol.lp_tol, max_abs(red.rhs));
  const auto res = simplex.run(nullptr, feas_tol);

  FeasOutcome out;
  if (res.status == DenseSimplex::Status::Optimal) {
    out.feasible = true;
    out.z = recover_z(red, res.w, p.num_vars());
    return out;
  }
  if (res.status == DenseSimplex::Status::Infeasible) {
    out.feasible = false;
    out.y = recover_y(red, res.y);
    out.infeasibility = res.phase1;
    return out;
  }
  throw NumericalBreakdownError("solve_feasibility: simplex breakdown");
}

FarkasOutcome solve_farkas(const Matrix& P, const Vector& d, const Tolerances& tol) {
  LinearProgramFeas p;
  p.E = P;
  p.f = d;
  p.signs.assign(P.cols(), VarSign::Nonnegative);
  const FeasOutcome feas = solve_feasibility(p, tol);
  FarkasOutcome out;
  out.feasible = feas.feasible;
  if (feas.feasible)
    out.z = feas.z;
  else
    out.y = feas.y;
  return out;
}

LinOptOutcome maximize_linear(const Vector& c, const Matrix& G, const Vector& b,
                              const Tolerances& tol) {
  LinearProgramFeas p;
  p.C = G;
  p.d = b;
  p.signs.assign(c.size(), VarSign::Free);
  const OptimizeOutcome res = optimize(p, c, /*maximize=*/true, tol);
  LinOptOutcome out;
  switch (res.status) {
    case OptimizeOutcome::Status::Optimum:
      out.status = LinOptOutcome::Status::Optimum;
      out.x = res.z;
      out.value = res.value;
      break;
    case OptimizeOutcome::Status::Unbounded:
      out.status = LinOptOutcome::Status::Unbounded;
      out.x = res.z;
      out.value = dot(c, res.z);
      out.ray = res.ray;
      break;
    case OptimizeOutcome::Status::Infeasible:
      out.status = LinOptOutcome::Status::Infeasible;
      break;
  }
  return out;
}

}  // namespace invkit
