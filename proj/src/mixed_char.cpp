#include "kspave/mixed_char.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kspave {

namespace {

void require_psd(const HermitianMatrix& a, const char* what) {
  const double lo = min_eigenvalue(a);
  const double scale = std::max(1.0, operator_norm(a));
  if (lo < -tol::kPsd * scale)
    throw NotPsd(std::string(what) + ": matrix is not PSD within tolerance");
}

// Lexicographic k-combinations of {0,..,n-1}.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

MatrixTuple::MatrixTuple(std::vector<HermitianMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw InvalidInput("matrix tuple must be nonempty");
  dim_ = mats_[0].dim();
  for (const HermitianMatrix& a : mats_) {
    if (a.dim() != dim_) throw InvalidInput("matrix tuple dimensions disagree");
    require_psd(a, "matrix tuple");
  }
}

HermitianMatrix MatrixTuple::sum() const {
  Matrix s(dim_, dim_);
  for (const HermitianMatrix& a : mats_) s = s + a.mat();
  return HermitianMatrix(s, 1e-10);
}

RandomRankOneModel::RandomRankOneModel(int dim,
                                       std::vector<std::vector<WeightedVector>> indices)
    : dim_(dim), indices_(std::move(indices)) {
  if (dim_ <= 0) throw InvalidInput("model dimension must be positive");
  if (indices_.empty()) throw InvalidInput("model must have at least one index");
  for (const auto& values : indices_) {
    if (values.empty()) throw InvalidInput("model index has empty support");
    double total = 0.0;
    for (const WeightedVector& wv : values) {
      if (static_cast<int>(wv.vector.size()) != dim_)
        throw InvalidInput("model vector length does not match dimension");
      if (wv.prob < 0.0) throw InvalidInput("model probability is negative");
      total += wv.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidInput("model probabilities must sum to 1");
  }
}

HermitianMatrix RandomRankOneModel::marginal_expectation(int i) const {
  Matrix e(dim_, dim_);
  for (const WeightedVector& wv : indices_[i]) {
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        e(a, b) += wv.prob * wv.vector[a] * std::conj(wv.vector[b]);
  }
  return HermitianMatrix(e, 1e-10);
}

double RandomRankOneModel::enumeration_size() const {
  double n = 1.0;
  for (const auto& values : indices_) n *= static_cast<double>(values.size());
  return n;
}

double polarization_work(int m, int d) {
  double total = 0.0;
  const int kmax = std::min(m, d);
  for (int k = 0; k <= kmax; ++k) {
    double binm = 1.0, bind = 1.0;
    for (int i = 0; i < k; ++i) {
      binm *= static_cast<double>(m - i) / (i + 1);
      bind *= static_cast<double>(d - i) / (i + 1);
    }
    total += binm * bind * std::ldexp(1.0, k);
  }
  return total;
}

RealPolynomial mixed_char_poly(const MatrixTuple& t, const EvalBudget& budget) {
  const int d = t.dim();
  const int m = t.count();
  const double work = polarization_work(m, d);
  if (work > budget.max_dets)
    throw BudgetExceeded("mixed_char_poly: " + std::to_string(work) +
                         " determinant evaluations exceed the budget of " +
                         std::to_string(budget.max_dets));

  std::vector<double> coeffs(d + 1, 0.0);
  coeffs[d] = 1.0;  // k = 0 term
  const int kmax = std::min(m, d);
  for (int k = 1; k <= kmax; ++k) {
    double qk = 0.0;
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) s[i] = i;
    do {
      std::vector<int> r(k);
      for (int i = 0; i < k; ++i) r[i] = i;
      do {
        // MD over T subset of S by inclusion-exclusion.
        const int subsets = 1 << k;
        for (int mask = 1; mask < subsets; ++mask) {
          Matrix acc(k, k);
          for (int bit = 0; bit < k; ++bit)
            if (mask & (1 << bit)) acc = acc + t.mat(s[bit]).mat().submatrix(r);
          const double dv = det_lu(std::move(acc)).real();
          const int tsz = __builtin_popcount(static_cast<unsigned>(mask));
          qk += ((k - tsz) % 2 == 0 ? dv : -dv);
        }
      } while (next_combination(r, d));
    } while (next_combination(s, m));
    coeffs[d - k] = (k % 2 == 0 ? qk : -qk);
  }
  return RealPolynomial(std::move(coeffs));
}

namespace {

RealPolynomial enumeration_expected(const RandomRankOneModel& model,
                                    const std::vector<int>& fixed,
                                    const EvalBudget& budget) {
  const int m = model.count();
  const int d = model.dim();
  std::vector<int> free_idx;
  for (int i = 0; i < m; ++i)
    if (fixed[i] < 0) free_idx.push_back(i);

  double assignments = 1.0;
  for (int i : free_idx) assignments *= static_cast<double>(model.values(i).size());
  if (assignments > budget.max_assignments)
    throw BudgetExceeded("expected_char_poly: " + std::to_string(assignments) +
                         " assignments exceed the enumeration budget of " +
                         std::to_string(budget.max_assignments));

  Matrix base(d, d);
  for (int i = 0; i < m; ++i) {
    if (fixed[i] < 0) continue;
    if (fixed[i] >= static_cast<int>(model.values(i).size()))
      throw InvalidInput("conditional fix is outside the index support");
    const Cvector& u = model.values(i)[fixed[i]].vector;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) base(a, b) += u[a] * std::conj(u[b]);
  }

  std::vector<double> acc(d + 1, 0.0);
  std::vector<int> odometer(free_idx.size(), 0);
  while (true) {
    Matrix sum = base;
    double w = 1.0;
    for (size_t j = 0; j < free_idx.size(); ++j) {
      const WeightedVector& wv = model.values(free_idx[j])[odometer[j]];
      w *= wv.prob;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) sum(a, b) += wv.vector[a] * std::conj(wv.vector[b]);
    }
    if (w != 0.0) {
      const RealPolynomial cp = char_poly(HermitianMatrix(sum, 1e-9));
      for (size_t k = 0; k < cp.coeffs().size(); ++k) acc[k] += w * cp.coeffs()[k];
    }
    size_t pos = 0;
    while (pos < odometer.size()) {
      if (++odometer[pos] < static_cast<int>(model.values(free_idx[pos]).size())) break;
      odometer[pos] = 0;
      ++pos;
    }
    if (pos == odometer.size()) break;
  }
  return RealPolynomial(std::move(acc));
}

RealPolynomial polarization_expected(const RandomRankOneModel& model,
                                     const std::vector<int>& fixed,
                                     const EvalBudget& budget) {
  std::vector<HermitianMatrix> mats;
  mats.reserve(model.count());
  for (int i = 0; i < model.count(); ++i) {
    if (fixed[i] >= 0) {
      if (fixed[i] >= static_cast<int>(model.values(i).size()))
        throw InvalidInput("conditional fix is outside the index support");
      mats.push_back(HermitianMatrix::rank_one(model.values(i)[fixed[i]].vector));
    } else {
      mats.push_back(model.marginal_expectation(i));
    }
  }
  return mixed_char_poly(MatrixTuple(std::move(mats)), budget);
}

}  // namespace

RealPolynomial conditional_expected_char_poly(const RandomRankOneModel& m,
                                              const std::vector<int>& fixed,
                                              ExpectationPath path,
                                              const EvalBudget& budget) {
  if (static_cast<int>(fixed.size()) != m.count())
    throw InvalidInput("conditional fix vector length mismatch");
  switch (path) {
    case ExpectationPath::kEnumeration:
      return enumeration_expected(m, fixed, budget);
    case ExpectationPath::kPolarization:
      return polarization_expected(m, fixed, budget);
    case ExpectationPath::kAuto: {
      double assignments = 1.0;
      for (int i = 0; i < m.count(); ++i)
        if (fixed[i] < 0) assignments *= static_cast<double>(m.values(i).size());
      if (assignments <= 1e4) return enumeration_expected(m, fixed, budget);
      return polarization_expected(m, fixed, budget);
    }
  }
  throw InvalidInput("unknown expectation path");
}

RealPolynomial expected_char_poly(const RandomRankOneModel& m, ExpectationPath path,
                                  const EvalBudget& budget) {
  return conditional_expected_char_poly(m, std::vector<int>(m.count(), -1), path, budget);
}

}  // namespace kspave
