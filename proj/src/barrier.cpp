#include "kspave/barrier.hpp"

#include <algorithm>
#include <cmath>

namespace kspave {

namespace {

Matrix pencil_at(const MatrixTuple& t, const std::vector<double>& x) {
  Matrix m(t.dim(), t.dim());
  for (int i = 0; i < t.count(); ++i) m = m + t.mat(i).mat().scaled(x[i]);
  return m;
}

// Barrier tr(M^{-1} A_j) at an arbitrary point.
double barrier_at(const MatrixTuple& t, int j, const std::vector<double>& x) {
  return trace_inverse_times(pencil_at(t, x), t.mat(j).mat()).real();
}

// Second log-derivative: d_i d_j log det M(x) = -tr(M^{-1}A_i M^{-1}A_j).
double log_second_derivative(const MatrixTuple& t, int i, int j,
                             const std::vector<double>& x) {
  const Matrix m = pencil_at(t, x);
  const Matrix mi = solve_lu(m, t.mat(i).mat());
  const Matrix mj = solve_lu(m, t.mat(j).mat());
  return -(mi * mj).trace().real();
}

// x above the roots of the pencil determinant: M(x + s) stays positive
// definite for s >= 0, which for PSD A_i reduces to M(x) positive definite.
bool above_roots(const MatrixTuple& t, const std::vector<double>& x) {
  const Matrix m = pencil_at(t, x);
  return min_eigenvalue(HermitianMatrix(m, 1e-9)) > 1e-12;
}

void require_resolution_of_identity(const MatrixTuple& t) {
  Matrix s = t.sum().mat();
  for (int i = 0; i < t.dim(); ++i) s(i, i) -= 1.0;
  if (operator_norm(HermitianMatrix(s, 1e-9)) > 1e-8)
    throw InvalidInput("barrier: the tuple must sum to the identity");
}

}  // namespace

double barrier_on_diagonal(const MatrixTuple& t, int j, double tpos) {
  if (j < 0 || j >= t.count()) throw InvalidInput("barrier: index out of range");
  if (!(tpos > 0.0)) throw InvalidInput("barrier: diagonal point must be positive");
  const std::vector<double> x(t.count(), tpos);
  return barrier_at(t, j, x);
}

McpCertificate mcp_certificate(const MatrixTuple& t, const EvalBudget& budget) {
  require_resolution_of_identity(t);
  McpCertificate cert;
  for (int i = 0; i < t.count(); ++i)
    cert.epsilon = std::max(cert.epsilon, t.mat(i).trace_real());
  const double se = std::sqrt(cert.epsilon);
  cert.t_star = se + cert.epsilon;
  cert.delta_star = 1.0 + se;
  cert.claimed_bound = cert.t_star + cert.delta_star;
  const RealPolynomial mu = mixed_char_poly(t, budget);
  cert.achieved_maxroot = maxroot(mu);
  cert.ok = cert.achieved_maxroot <= cert.claimed_bound + 1e-9;
  return cert;
}

BarrierShiftReport barrier_shift_check(const MatrixTuple& t, int samples) {
  require_resolution_of_identity(t);
  if (samples < 1) throw InvalidInput("barrier_shift_check: samples must be >= 1");
  BarrierShiftReport rep;
  const int m = t.count();
  const double h = 0.5;

  for (int s = 0; s < samples; ++s) {
    const double t0 = 0.5 + 2.0 * static_cast<double>(s) / samples;
    std::vector<double> x(m, t0);
    if (!above_roots(t, x)) {
      ++rep.samples_skipped;
      continue;
    }
    ++rep.samples_checked;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        double phi[3];
        bool usable = true;
        for (int step = 0; step < 3; ++step) {
          std::vector<double> y = x;
          y[j] += h * step;
          if (!above_roots(t, y)) {
            usable = false;
            break;
          }
          try {
            phi[step] = barrier_at(t, i, y);
          } catch (const SingularPoint&) {
            usable = false;
            break;
          }
        }
        if (!usable) {
          ++rep.samples_skipped;
          continue;
        }
        if (phi[0] < -1e-9) rep.nonneg_ok = false;
        const double inc = std::max(phi[1] - phi[0], phi[2] - phi[1]);
        rep.worst_monotone_margin = std::max(rep.worst_monotone_margin, inc);
        if (inc > 1e-9) rep.monotone_ok = false;
        const double second = phi[2] - 2.0 * phi[1] + phi[0];
        rep.worst_convexity_margin = std::min(rep.worst_convexity_margin, second);
        if (second < -1e-9) rep.convex_ok = false;
      }

      // shift inequality: with phi_j(x) < 1 pick delta = 1/(1 - phi_j(x)),
      // then the barrier of (1 - d/dz_j)p at x + delta e_j must not exceed
      // the barrier of p at x, in every direction i.
      const double phij = barrier_at(t, j, x);
      if (phij < 1.0 - 1e-9) {
        const double delta = 1.0 / (1.0 - phij);
        std::vector<double> y = x;
        y[j] += delta;
        if (!above_roots(t, y)) {
          ++rep.samples_skipped;
          continue;
        }
        const double phij_y = barrier_at(t, j, y);
        for (int i = 0; i < m; ++i) {
          const double phi_x = barrier_at(t, i, x);
          const double phi_y = barrier_at(t, i, y);
          const double mixed = log_second_derivative(t, i, j, y);
          // Phi^i of (1 - d_j)p at y, via log(p(1 - Phi^j)).
          const double shifted = phi_y + (-mixed) / (1.0 - phij_y);
          const double excess = shifted - phi_x;
          rep.worst_shift_margin = std::max(rep.worst_shift_margin, excess);
          if (excess > 1e-9) rep.shift_bound_ok = false;
        }
      }
    }
  }
  return rep;
}

}  // namespace kspave
