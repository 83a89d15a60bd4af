#include "kspave/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kspave {

namespace {

constexpr double kTrimRel = 1e-13;
constexpr int kNewtonMaxIters = 200;
constexpr int kBisectIters = 200;

double max_abs_coeff(const std::vector<double>& c) {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidInput("polynomial coefficient is not finite");
  }
  trim();
}

void RealPolynomial::trim() {
  const double thresh = kTrimRel * max_abs_coeff(coeffs_);
  size_t last = 0;
  bool any = false;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) > thresh) {
      last = i;
      any = true;
    }
  }
  if (!any) {
    coeffs_.assign(1, 0.0);
    return;
  }
  coeffs_.resize(last + 1);
  for (double& c : coeffs_) {
    if (std::abs(c) <= thresh) c = 0.0;
  }
}

RealPolynomial RealPolynomial::constant(double c) {
  return RealPolynomial(std::vector<double>{c});
}

RealPolynomial RealPolynomial::from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] *= -r;
  }
  return RealPolynomial(std::move(c));
}

int RealPolynomial::degree() const {
  if (coeffs_.size() == 1 && coeffs_[0] == 0.0) return -1;
  return static_cast<int>(coeffs_.size()) - 1;
}

double RealPolynomial::leading() const { return coeffs_.back(); }

bool RealPolynomial::is_monic(double tol) const {
  return std::abs(leading() - 1.0) <= tol;
}

double RealPolynomial::operator()(double x) const {
  double v = 0.0;
  for (size_t i = coeffs_.size(); i-- > 0;) v = v * x + coeffs_[i];
  return v;
}

RealPolynomial RealPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return RealPolynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return RealPolynomial(std::move(d));
}

RealPolynomial RealPolynomial::operator+(const RealPolynomial& q) const {
  std::vector<double> c(std::max(coeffs_.size(), q.coeffs_.size()), 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < q.coeffs_.size(); ++i) c[i] += q.coeffs_[i];
  return RealPolynomial(std::move(c));
}

RealPolynomial RealPolynomial::operator-(const RealPolynomial& q) const {
  return *this + q.scaled(-1.0);
}

RealPolynomial RealPolynomial::operator*(const RealPolynomial& q) const {
  if (is_zero() || q.is_zero()) return RealPolynomial();
  std::vector<double> c(coeffs_.size() + q.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * q.coeffs_[j];
  return RealPolynomial(std::move(c));
}

RealPolynomial RealPolynomial::scaled(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return RealPolynomial(std::move(c));
}

std::pair<RealPolynomial, RealPolynomial> RealPolynomial::divmod(
    const RealPolynomial& p, const RealPolynomial& q) {
  if (q.is_zero()) throw InvalidInput("polynomial division by zero");
  std::vector<double> rem = p.coeffs_;
  const int dq = q.degree();
  const int dp = p.degree();
  if (dp < dq) return {RealPolynomial(), p};
  std::vector<double> quot(dp - dq + 1, 0.0);
  const double lead = q.coeffs_.back();
  for (int k = dp - dq; k >= 0; --k) {
    const double f = rem[k + dq] / lead;
    quot[k] = f;
    for (int j = 0; j <= dq; ++j) rem[k + j] -= f * q.coeffs_[j];
  }
  rem.resize(dq > 0 ? dq : 1);
  return {RealPolynomial(std::move(quot)), RealPolynomial(std::move(rem))};
}

RealPolynomial differentiate(const RealPolynomial& p) { return p.derivative(); }

double cauchy_root_bound(const RealPolynomial& p) {
  const int d = p.degree();
  if (d < 1) return 1.0;
  double m = 0.0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(p.coeffs()[i]));
  return 1.0 + m / std::abs(p.leading());
}

bool above_all_roots(const RealPolynomial& p, double x) {
  // Taylor coefficients of p at x by repeated synthetic division.
  std::vector<double> c = p.coeffs();
  const int d = p.degree();
  if (d < 0) return false;
  std::vector<double> taylor(d + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    // divide c by (z - x): remainder is the next Taylor coefficient
    double carry = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      const double t = c[i] + carry * x;
      c[i] = carry;
      carry = t;
    }
    taylor[k] = carry;
    if (!c.empty()) c.erase(c.begin());
  }
  double scale = max_abs_coeff(taylor);
  const double slack = 1e-12 * std::max(1.0, scale);
  for (double t : taylor)
    if (t < -slack) return false;
  return true;
}

namespace {

// Sturm chain; returns nullopt when the remainders collapse in a way that
// cannot be distinguished from underflow.
std::optional<std::vector<RealPolynomial>> sturm_chain(const RealPolynomial& p) {
  std::vector<RealPolynomial> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (chain.back().degree() > 0) {
    const RealPolynomial& a = chain[chain.size() - 2];
    const RealPolynomial& b = chain.back();
    auto [quot, rem] = RealPolynomial::divmod(a, b);
    (void)quot;
    // threshold the remainder against its inputs to decide "exact zero"
    const double scale =
        std::max(max_abs_coeff(a.coeffs()), max_abs_coeff(b.coeffs()));
    std::vector<double> rc = rem.coeffs();
    bool all_small = true;
    for (double c : rc)
      if (std::abs(c) > 1e-12 * std::max(1.0, scale)) all_small = false;
    if (all_small) break;  // b divides a up to roundoff: chain ends at gcd
    chain.push_back(rem.scaled(-1.0));
    if (chain.size() > 4 * static_cast<size_t>(p.degree()) + 8)
      return std::nullopt;  // degenerating without degree progress
  }
  return chain;
}

int sign_changes(const std::vector<RealPolynomial>& chain, double x) {
  int changes = 0;
  int prev = 0;
  for (const RealPolynomial& f : chain) {
    const double v = f(x);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

// Nudge an endpoint outward until it is not a (numerical) root.
double clear_endpoint(const RealPolynomial& p, double x, double direction) {
  const double scale = std::max(1.0, std::abs(x));
  double y = x;
  for (int tries = 0; tries < 40; ++tries) {
    if (std::abs(p(y)) > 1e-12 * std::max(1.0, max_abs_coeff(p.coeffs()))) return y;
    y += direction * 1e-9 * scale * std::pow(2.0, tries);
  }
  return y;
}

}  // namespace

int sturm_real_root_count(const RealPolynomial& p, double lo, double hi) {
  if (!(lo < hi)) throw InvalidInput("sturm_real_root_count: lo must be < hi");
  const int d = p.degree();
  if (d <= 0) return 0;
  auto chain = sturm_chain(p);
  if (!chain) throw Error("sturm_real_root_count: degenerate Sturm chain");
  const double a = clear_endpoint(p, lo, -1.0);
  const double b = clear_endpoint(p, hi, +1.0);
  return sign_changes(*chain, a) - sign_changes(*chain, b);
}

namespace {

// gcd(p, p') by Euclid with a relative coefficient threshold; the returned
// polynomial is only used to peel multiplicities, so it is normalized monic.
RealPolynomial rough_gcd(const RealPolynomial& p, const RealPolynomial& q,
                         bool* gray_zone) {
  RealPolynomial a = p, b = q;
  while (!b.is_zero() && b.degree() > 0) {
    auto [quot, rem] = RealPolynomial::divmod(a, b);
    (void)quot;
    const double scale =
        std::max(max_abs_coeff(a.coeffs()), max_abs_coeff(b.coeffs()));
    const double rmax = max_abs_coeff(rem.coeffs());
    if (rmax <= 1e-12 * std::max(1.0, scale)) return b.scaled(1.0 / b.leading());
    if (rmax <= 1e-7 * std::max(1.0, scale)) *gray_zone = true;
    a = b;
    b = rem;
  }
  return RealPolynomial::constant(1.0);
}

}  // namespace

RootednessVerdict is_real_rooted(const RealPolynomial& p) {
  RootednessVerdict v;
  if (p.is_zero()) {
    v.status = Rootedness::kInconclusive;
    return v;
  }
  if (p.degree() == 0) {
    v.status = Rootedness::kRealRooted;
    v.real_root_count = 0;
    return v;
  }
  bool gray = false;
  const RealPolynomial g = rough_gcd(p, p.derivative(), &gray);
  RealPolynomial sf = p;
  if (g.degree() > 0) {
    auto [quot, rem] = RealPolynomial::divmod(p, g);
    (void)rem;
    sf = quot;
  }
  if (sf.degree() <= 0) {
    v.status = Rootedness::kInconclusive;
    return v;
  }
  const double bound = cauchy_root_bound(sf) + 1.0;
  auto chain = sturm_chain(sf);
  if (!chain) {
    v.status = Rootedness::kInconclusive;
    return v;
  }
  const double a = clear_endpoint(sf, -bound, -1.0);
  const double b = clear_endpoint(sf, bound, +1.0);
  v.witness = std::make_pair(a, b);
  v.real_root_count = sign_changes(*chain, a) - sign_changes(*chain, b);
  if (v.real_root_count == sf.degree()) {
    v.status = Rootedness::kRealRooted;
  } else if (gray) {
    v.status = Rootedness::kInconclusive;
  } else {
    v.status = Rootedness::kNotRealRooted;
  }
  return v;
}

double maxroot(const RealPolynomial& p) {
  const int d = p.degree();
  if (d < 1) throw InvalidInput("maxroot: polynomial has no roots");
  if (p.leading() < 0.0)
    throw InvalidInput("maxroot: leading coefficient must be positive");

  double x = cauchy_root_bound(p);
  double last_step = std::max(1.0, std::abs(x));
  const RealPolynomial dp = p.derivative();
  for (int it = 0; it < kNewtonMaxIters; ++it) {
    const double px = p(x);
    const double dpx = dp(x);
    if (dpx <= 0.0) break;  // flat or past the root cluster: bisect
    const double step = px / dpx;
    if (step < -1e-9 * (1.0 + std::abs(x)))
      throw InvalidInput("maxroot: Newton step increased; input is not real-rooted");
    if (std::abs(step) < 1e-13 * (1.0 + std::abs(x))) return x - std::max(step, 0.0);
    x -= std::max(step, 0.0);
    last_step = std::max(step, 1e-300);
  }

  // Bisection on the above-the-roots predicate.
  double hi = x;
  if (!above_all_roots(p, hi))
    throw InvalidInput("maxroot: iterate left the above-roots region; input is not real-rooted");
  double width = std::max(last_step * 4.0, 1e-12 * (1.0 + std::abs(hi)));
  double lo = hi - width;
  int grow = 0;
  while (above_all_roots(p, lo)) {
    hi = lo;
    width *= 2.0;
    lo = hi - width;
    if (++grow > 200)
      return hi;  // constant-sign tail; hi is the infimum of the above region
  }
  for (int it = 0; it < kBisectIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (above_all_roots(p, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

RealPolynomial convex_combination(const std::vector<RealPolynomial>& ps,
                                  const std::vector<double>& ts) {
  if (ps.empty() || ps.size() != ts.size())
    throw InvalidInput("convex_combination: mismatched inputs");
  double sum = 0.0;
  for (double t : ts) {
    if (t < -1e-15) throw InvalidInput("convex_combination: negative weight");
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidInput("convex_combination: weights must sum to 1");
  const int d = ps[0].degree();
  for (const RealPolynomial& p : ps)
    if (p.degree() != d)
      throw InvalidInput("convex_combination: mismatched degrees");
  RealPolynomial acc;
  for (size_t i = 0; i < ps.size(); ++i) acc = acc + ps[i].scaled(ts[i]);
  return acc;
}

}  // namespace kspave
