#pragma once

// Mixed characteristic polynomials mu[A_1,...,A_m](z) of PSD tuples, by two
// independent evaluators, and expected characteristic polynomials of sums of
// independent finite-valued random rank-one matrices.
//
// The polarization evaluator uses that det(zI + sum z_i A_i) has degree <= d
// jointly in the z_i, so applying prod(1 - d/dz_i) at zero reduces to
// multilinear coefficients of k x k pencils, each extracted by a finite
// difference over subsets:
//
//   mu(z) = sum_k (-1)^k z^(d-k) sum_{|S|=k} sum_{|R|=k} MD(A_i[R] : i in S)
//   MD(B_1..B_k) = sum_{T subset [k]} (-1)^(k-|T|) det(sum_{i in T} B_i)

#include <vector>

#include "kspave/linalg.hpp"
#include "kspave/poly.hpp"

namespace kspave {

// Ordered tuple of PSD Hermitian matrices of a common dimension.
// PSD is certified at construction (eigenvalues >= -1e-10).
class MatrixTuple {
 public:
  explicit MatrixTuple(std::vector<HermitianMatrix> mats);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(mats_.size()); }
  const HermitianMatrix& mat(int i) const { return mats_[i]; }
  const std::vector<HermitianMatrix>& mats() const { return mats_; }

  HermitianMatrix sum() const;

 private:
  int dim_;
  std::vector<HermitianMatrix> mats_;
};

struct WeightedVector {
  Cvector vector;
  double prob = 0.0;
};

// Jointly independent random rank-one model: index i takes the value
// v v* with the listed probability; only the marginals are stored.
class RandomRankOneModel {
 public:
  RandomRankOneModel(int dim, std::vector<std::vector<WeightedVector>> indices);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(indices_.size()); }
  const std::vector<WeightedVector>& values(int i) const { return indices_[i]; }

  HermitianMatrix marginal_expectation(int i) const;  // E[v_i v_i*]
  double enumeration_size() const;                    // prod of support sizes

 private:
  int dim_;
  std::vector<std::vector<WeightedVector>> indices_;
};

struct EvalBudget {
  double max_dets = 1e7;         // polarization: k x k determinant evaluations
  double max_assignments = 1e6;  // enumeration: full value assignments
};

// Work estimate of the polarization evaluator: sum_k C(m,k) C(d,k) 2^k.
double polarization_work(int m, int d);

RealPolynomial mixed_char_poly(const MatrixTuple& t, const EvalBudget& budget = {});

enum class ExpectationPath { kAuto, kEnumeration, kPolarization };

// E det(zI - sum X_i), either by full enumeration of value assignments or by
// mixed_char_poly of the marginal expectations (the two agree).
RealPolynomial expected_char_poly(const RandomRankOneModel& m,
                                  ExpectationPath path = ExpectationPath::kAuto,
                                  const EvalBudget& budget = {});

// Conditioned variant: fixed[i] >= 0 pins index i to that support value; the
// remaining indices keep their marginal expectations.
RealPolynomial conditional_expected_char_poly(const RandomRankOneModel& m,
                                              const std::vector<int>& fixed,
                                              ExpectationPath path = ExpectationPath::kAuto,
                                              const EvalBudget& budget = {});

}  // namespace kspave
