#pragma once

#include <cstdint>

namespace invkit {

// One knob set shared by every numeric decision in the toolkit. Comparisons
// against a matrix-valued quantity use the scaled band tol * (1 + ||M||_F);
// helpers below. Defaults follow the shipped configuration; the CLI can
// override psd/lp/membership per run.
struct Tolerances {
  double eig_tol = 1e-10;         // symmetry check + eigen residual budget
  double psd_tol = 1e-8;          // semidefiniteness band
  double singular_tol = 1e-12;    // pivot threshold in invert()
  double exp_tol = 1e-12;         // matrix exponential budget (||At|| <= 64)
  double lp_tol = 1e-9;           // LP feasibility slack
  double pivot_tol = 1e-11;       // simplex pivot admission threshold
  double membership_tol = 1e-7;   // set membership band
  double mu_search_tol = 1e-10;   // scalar LMI search interval width
};

inline double scaled_band(double tol, double frob_norm) {
  return tol * (1.0 + frob_norm);
}

}  // namespace invkit
