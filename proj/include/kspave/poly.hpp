#pragma once

// Real univariate polynomials: arithmetic, Sturm-chain root counting,
// real-rootedness certification, and largest-root extraction. These are the
// scalar primitives behind the interlacing argument, so maxroot() in
// particular is written to be monotone and fail loudly on inputs that are
// not real-rooted.

#include <optional>
#include <utility>
#include <vector>

#include "kspave/errors.hpp"

namespace kspave {

class RealPolynomial {
 public:
  // Zero polynomial.
  RealPolynomial() : coeffs_{0.0} {}

  // Coefficients in ascending degree order. Trailing coefficients below
  // 1e-13 relative to the largest magnitude are trimmed.
  explicit RealPolynomial(std::vector<double> coeffs);

  static RealPolynomial constant(double c);
  static RealPolynomial from_roots(const std::vector<double>& roots);

  const std::vector<double>& coeffs() const { return coeffs_; }

  // Degree after trimming; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  double leading() const;
  bool is_monic(double tol = 1e-10) const;

  double operator()(double x) const;  // Horner evaluation

  RealPolynomial derivative() const;

  RealPolynomial operator+(const RealPolynomial& q) const;
  RealPolynomial operator-(const RealPolynomial& q) const;
  RealPolynomial operator*(const RealPolynomial& q) const;
  RealPolynomial scaled(double s) const;

  // Euclidean division p = q*quot + rem with deg(rem) < deg(q).
  static std::pair<RealPolynomial, RealPolynomial> divmod(
      const RealPolynomial& p, const RealPolynomial& q);

 private:
  std::vector<double> coeffs_;  // ascending, at least one entry
  void trim();
};

enum class Rootedness { kRealRooted, kNotRealRooted, kInconclusive };

struct RootednessVerdict {
  Rootedness status = Rootedness::kInconclusive;
  // Distinct real roots found by the Sturm count of the square-free part.
  // status == kRealRooted exactly when this equals the square-free degree.
  int real_root_count = 0;
  // Interval the Sturm chain was evaluated over, when one was formed.
  std::optional<std::pair<double, double>> witness;
};

RealPolynomial differentiate(const RealPolynomial& p);

// Number of distinct real roots in (lo, hi] by Sturm sign changes.
// Endpoints that are (numerically) roots are nudged outward by 1e-9*scale.
// Throws Error if the chain degenerates (all remainder coefficients
// underflow) before reaching a constant.
int sturm_real_root_count(const RealPolynomial& p, double lo, double hi);

// Tri-state real-rootedness certificate. Multiple roots are handled by one
// GCD reduction to the square-free part, so (z-1)^3 certifies real-rooted.
RootednessVerdict is_real_rooted(const RealPolynomial& p);

// Largest real root of a real-rooted polynomial with positive leading
// coefficient, to absolute accuracy about 1e-11*(1+|root|). Newton from the
// Cauchy bound (monotone non-increasing for real-rooted input) with a
// bisection fallback on the above-the-roots predicate. Throws InvalidInput
// if the iteration behaves in a way impossible for real-rooted input.
double maxroot(const RealPolynomial& p);

// Coefficient-wise sum t[i]*p[i]. Requires equal degrees, t >= 0 and
// sum(t) = 1 within 1e-12.
RealPolynomial convex_combination(const std::vector<RealPolynomial>& ps,
                                  const std::vector<double>& ts);

// 1 + max |c_i| / |lead|; every root has magnitude below this.
double cauchy_root_bound(const RealPolynomial& p);

// True when every Taylor coefficient of p at x is nonnegative (within a
// small relative slack), i.e. p(x + t) > 0 for all t >= 0 up to roundoff.
// For real-rooted p with positive lead this tests x >= maxroot(p).
bool above_all_roots(const RealPolynomial& p, double x);

}  // namespace kspave
