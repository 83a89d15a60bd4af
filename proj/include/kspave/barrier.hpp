#pragma once

// Multivariate barrier certificate for mixed characteristic polynomials.
// For the pencil p(z_1..z_m) = det(sum z_i A_i), the barrier in direction j
// at a point x above the roots is tr(M(x)^{-1} A_j) with M(x) = sum x_i A_i;
// all derivative quantities used here reduce to linear solves against the
// pencil, never symbolic differentiation.

#include <vector>

#include "kspave/mixed_char.hpp"

namespace kspave {

struct McpCertificate {
  double epsilon = 0.0;           // max_i trace(A_i)
  double t_star = 0.0;            // sqrt(eps) + eps
  double delta_star = 0.0;        // 1 + sqrt(eps)
  double claimed_bound = 0.0;     // t_star + delta_star = (1 + sqrt(eps))^2
  double achieved_maxroot = 0.0;  // maxroot of mu[A_1..A_m]
  bool ok = false;                // achieved <= claimed + 1e-9
};

// Barrier of the pencil in direction j at the diagonal point (t,...,t).
// Equals trace(A_j)/t whenever sum A_i = I. Throws SingularPoint if the
// pencil is singular there.
double barrier_on_diagonal(const MatrixTuple& t, int j, double tpos);

// Runs the root-bound certificate: requires ||sum A_i - I|| <= 1e-8, takes
// eps = max trace, computes mu and its largest root, and reports whether the
// (1+sqrt(eps))^2 bound holds. A false `ok` would falsify the bound and
// therefore signals an implementation bug; callers decide how loudly to fail.
McpCertificate mcp_certificate(const MatrixTuple& t, const EvalBudget& budget = {});

struct BarrierShiftReport {
  int samples_checked = 0;
  int samples_skipped = 0;  // singular or not above the roots
  bool nonneg_ok = true;
  bool monotone_ok = true;
  bool convex_ok = true;
  bool shift_bound_ok = true;          // barrier of (1 - d/dz_j)p at x + delta e_j
  double worst_monotone_margin = 0.0;  // most positive increase seen
  double worst_convexity_margin = 0.0;  // most negative second difference seen
  double worst_shift_margin = 0.0;      // most positive excess over the bound
};

// Samples diagonal points above the roots and coordinate shifts; verifies
// that each directional barrier is nonnegative, non-increasing, and convex
// (by finite differences), and spot-checks the one-step shift inequality
// used by the root bound. Requires sum A_i = I.
BarrierShiftReport barrier_shift_check(const MatrixTuple& t, int samples);

}  // namespace kspave
