#include "kspave/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kspave {

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(block_count);
  for (size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(static_cast<int>(i));
  return out;
}

void Partition::validate() const {
  if (block_count <= 0) throw InvalidInput("partition: block count must be positive");
  for (int a : assignment)
    if (a < 0 || a >= block_count) throw InvalidInput("partition: assignment out of range");
}

Partition refine(const Partition& p1, const Partition& p2) {
  p1.validate();
  p2.validate();
  if (p1.assignment.size() != p2.assignment.size())
    throw InvalidInput("refine: partitions cover different index ranges");
  Partition out;
  out.block_count = p1.block_count * p2.block_count;
  out.assignment.resize(p1.assignment.size());
  for (size_t i = 0; i < p1.assignment.size(); ++i)
    out.assignment[i] = p1.assignment[i] * p2.block_count + p2.assignment[i];
  return out;
}

double PartitionCertificate::max_bessel() const {
  double m = 0.0;
  for (double b : per_block_bessel) m = std::max(m, b);
  return m;
}

RandomRankOneModel lift_to_blocks(const VectorSystem& v, int r) {
  if (r < 1) throw InvalidInput("lift_to_blocks: r must be >= 1");
  const int d = v.dim();
  const double scale = std::sqrt(static_cast<double>(r));
  std::vector<std::vector<WeightedVector>> indices(v.size());
  for (int i = 0; i < v.size(); ++i) {
    indices[i].reserve(r);
    for (int k = 0; k < r; ++k) {
      Cvector val(static_cast<size_t>(r) * d, Complex(0.0));
      for (int j = 0; j < d; ++j) val[static_cast<size_t>(k) * d + j] = scale * v.vec(i)[j];
      indices[i].push_back({std::move(val), 1.0 / r});
    }
  }
  return RandomRankOneModel(r * d, std::move(indices));
}

VectorSystem extend_to_parseval(const VectorSystem& v) {
  const int d = v.dim();
  const HermitianMatrix s = frame_operator(v);
  Matrix tm = Matrix::identity(d) - s.mat();
  const EigenDecomposition e = eigh(HermitianMatrix(tm, 1e-9));
  if (e.eigenvalues.back() < -1e-10)
    throw InvalidInput("extend_to_parseval: Bessel bound exceeds 1");
  const double delta = v.max_norm_squared();

  std::vector<Cvector> out = v.vectors();
  for (int j = 0; j < d; ++j) {
    const double lam = e.eigenvalues[j];
    if (lam <= 1e-10) continue;
    if (delta <= 1e-14)
      throw InvalidInput("extend_to_parseval: cannot append with zero norm cap");
    const int copies = static_cast<int>(std::ceil(lam / delta - 1e-12));
    const double w = std::sqrt(lam / copies);
    Cvector base(d);
    for (int i = 0; i < d; ++i) base[i] = w * e.vectors(i, j);
    for (int c = 0; c < copies; ++c) out.push_back(base);
  }
  return VectorSystem(d, std::move(out));
}

// ---------------------------------------------------------------------------
// Lifted-model evaluator.
//
// For the r-block lift conditioned on a partial assignment, the expected
// characteristic polynomial equals mu of the tuple whose fixed entries are
// r u_i u_i* placed in one block and whose free entries are block-diagonal
// copies of u_i u_i*. Writing mu through subset sums of e_k(A_T) and using
// Cauchy-Binet, every elementary-symmetric coefficient is a nonnegative
// combination of Gram principal minors det(G[S]) with weight r^|S cap fixed|.
// Ranked zeta transforms over index masks make each lookup O(1), so a full
// evaluation costs O(2^m) regardless of r and of the lifted dimension r*d.
// ---------------------------------------------------------------------------

namespace detail {

double LiftedPoly::max_root() const {
  double root = maxroot(core);
  if (zero_multiplicity > 0) root = std::max(root, 0.0);
  return root;
}

namespace {

using Mask = uint64_t;

int popcount(Mask m) { return __builtin_popcountll(m); }

// Truncated signed power-series product: c[k] = sum a[i] b[k-i], length L.
void mul_trunc(const double* a, const double* b, double* c, int L) {
  for (int k = 0; k < L; ++k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    c[k] = acc;
  }
}

void pow_trunc(const double* a, int e, double* out, int L) {
  std::vector<double> base(a, a + L), tmp(L), acc(L, 0.0);
  acc[0] = 1.0;
  while (e > 0) {
    if (e & 1) {
      mul_trunc(acc.data(), base.data(), tmp.data(), L);
      std::swap(acc, tmp);
    }
    e >>= 1;
    if (e) {
      mul_trunc(base.data(), base.data(), tmp.data(), L);
      std::swap(base, tmp);
    }
  }
  std::copy(acc.begin(), acc.end(), out);
}

class LiftEvaluator {
 public:
  LiftEvaluator(const VectorSystem& v, int r, const GreedyOptions& opts)
      : m_(v.size()), r_(r), opts_(opts) {
    if (m_ > opts.max_subset_bits)
      throw BudgetExceeded("lift evaluator: system of " + std::to_string(m_) +
                           " vectors exceeds the subset budget of " +
                           std::to_string(opts.max_subset_bits) + " bits");
    L_ = std::min<long long>(m_, static_cast<long long>(r) * v.dim()) + 1;
    big_d_ = static_cast<long long>(r) * v.dim();
    const double bytes =
        (std::min(r_, m_) + 1.0) * std::ldexp(1.0, m_) * L_ * sizeof(double);
    if (bytes > opts.max_table_bytes)
      throw BudgetExceeded("lift evaluator: tables would need " +
                           std::to_string(bytes) + " bytes");
    full_mask_ = (m_ == 64) ? ~Mask(0) : ((Mask(1) << m_) - 1);
    assignment_.assign(m_, -1);
    block_mask_.assign(r_, 0);
    ztab_.assign(r_, {});
    build_gram_minors(v);
    ntab_ = build_table(0);
    binom_.assign(m_ + 1, std::vector<double>(m_ + 1, 0.0));
    for (int n = 0; n <= m_; ++n) {
      binom_[n][0] = 1.0;
      for (int k = 1; k <= n; ++k)
        binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0.0);
    }
  }

  void assign(int index, int block) {
    assignment_[index] = block;
    block_mask_[block] |= Mask(1) << index;
    ztab_[block] = build_table(block_mask_[block]);
  }

  int assignment(int index) const { return assignment_[index]; }

  LiftedPoly eval(int cand_index, int cand_block) const {
    const Mask cand_bit = cand_index >= 0 ? (Mask(1) << cand_index) : 0;
    Mask assigned = 0;
    for (int i = 0; i < m_; ++i)
      if (assignment_[i] >= 0) assigned |= Mask(1) << i;
    const Mask u_mask = full_mask_ & ~assigned & ~cand_bit;

    struct BlockRef {
      Mask members;
      const std::vector<double>* table;
      bool has_candidate;
    };
    std::vector<BlockRef> blocks;
    for (int k = 0; k < r_; ++k) {
      const bool is_cand = (k == cand_block && cand_index >= 0);
      if (block_mask_[k] == 0 && !is_cand) continue;
      const std::vector<double>* table =
          block_mask_[k] != 0 ? &ztab_[k] : &ntab_;
      blocks.push_back({block_mask_[k] | (is_cand ? cand_bit : 0), table, is_cand});
    }
    const int b = static_cast<int>(blocks.size());
    const int L = L_;

    // acc[j][l]: signed truncated series of charpoly(A_T) summed over |T|=j.
    std::vector<double> acc((m_ + 1) * L, 0.0);
    std::vector<double> npow(L), cur((m_ + 1) * L), next((m_ + 1) * L), yk((m_ + 1) * L),
        row(L), tmp(L);

    Mask w = u_mask;
    while (true) {
      const int wc = popcount(w);
      pow_trunc(&ntab_[w * L], r_ - b, npow.data(), L);
      int cur_deg = 0;
      std::fill(cur.begin(), cur.begin() + L, 0.0);
      std::copy(npow.begin(), npow.end(), cur.begin());
      for (const BlockRef& blk : blocks) {
        // Y(y) = sum_{P subset members} y^{|P|} series(rP + W)
        const int fk = popcount(blk.members);
        std::fill(yk.begin(), yk.begin() + (fk + 1) * L, 0.0);
        Mask p = blk.members;
        while (true) {
          const int pc = popcount(p);
          const Mask mask = p | w;
          const double* src = &(*blk.table)[mask * L];
          double* dst = &yk[pc * L];
          if (blk.has_candidate && (p & cand_bit)) {
            // candidate enters scaled by r: r*T[mask] - (r-1)*T[mask \ cand]
            const double* drop = &(*blk.table)[(mask & ~cand_bit) * L];
            for (int l = 0; l < L; ++l)
              dst[l] += r_ * src[l] - (r_ - 1.0) * drop[l];
          } else {
            for (int l = 0; l < L; ++l) dst[l] += src[l];
          }
          if (p == 0) break;
          p = (p - 1) & blk.members;
        }
        // cur <- cur * Y  (bivariate in y, truncated series in z)
        const int out_deg = cur_deg + fk;
        std::fill(next.begin(), next.begin() + (out_deg + 1) * L, 0.0);
        for (int a = 0; a <= cur_deg; ++a)
          for (int c = 0; c <= fk; ++c) {
            mul_trunc(&cur[a * L], &yk[c * L], tmp.data(), L);
            double* dst = &next[(a + c) * L];
            for (int l = 0; l < L; ++l) dst[l] += tmp[l];
          }
        std::swap(cur, next);
        cur_deg = out_deg;
      }
      for (int a = 0; a <= cur_deg; ++a) {
        double* dst = &acc[(a + wc) * L];
        const double* src = &cur[a * L];
        for (int l = 0; l < L; ++l) dst[l] += src[l];
      }
      if (w == 0) break;
      w = (w - 1) & u_mask;
    }

    // core coefficient of z^(K-k): sum_j (-1)^(k-j) C(m-j, k-j) acc[j][k]
    const int K = L - 1;
    std::vector<double> core(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double c = binom_[m_ - j][k - j];
        if (c == 0.0) continue;
        const double term = c * acc[j * L + k];
        s += ((k - j) % 2 == 0) ? term : -term;
      }
      core[K - k] = s;
    }
    LiftedPoly out;
    out.core = RealPolynomial(std::move(core));
    out.zero_multiplicity = static_cast<int>(big_d_ - K);
    return out;
  }

 private:
  void build_gram_minors(const VectorSystem& v) {
    Matrix g(m_, m_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) g(i, j) = inner_product(v.vec(j), v.vec(i));
    gdet_.assign(Mask(1) << m_, 0.0);
    gdet_[0] = 1.0;
    for (Mask mask = 1; mask < (Mask(1) << m_); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < m_; ++i)
        if (mask & (Mask(1) << i)) idx.push_back(i);
      if (static_cast<int>(idx.size()) > L_ - 1) continue;  // never read
      gdet_[mask] = det_lu(g.submatrix(idx)).real();
    }
  }

  // Ranked weighted zeta table over all masks: row(M)[j] holds the signed
  // series slot sum_{S subset M, |S|=j} (-1)^j r^|S cap members| det(G[S]).
  std::vector<double> build_table(Mask members) const {
    const size_t n = Mask(1) << m_;
    std::vector<double> tab(n * L_, 0.0);
    std::vector<double> wprod(n, 1.0);
    for (Mask mask = 1; mask < n; ++mask) {
      const Mask low = mask & (~mask + 1);
      const double wlow = (low & members) ? static_cast<double>(r_) : 1.0;
      wprod[mask] = wprod[mask & (mask - 1)] * wlow;
      const int pc = popcount(mask);
      if (pc <= L_ - 1)
        tab[mask * L_ + pc] = (pc % 2 == 0 ? 1.0 : -1.0) * wprod[mask] * gdet_[mask];
    }
    tab[0] = 1.0;  // e_0
    for (Mask mask = 1; mask < n; ++mask) tab[mask * L_] = 1.0;
    for (int bit = 0; bit < m_; ++bit) {
      const Mask b = Mask(1) << bit;
      for (Mask mask = 0; mask < n; ++mask) {
        if (!(mask & b)) continue;
        double* dst = &tab[mask * L_];
        const double* src = &tab[(mask ^ b) * L_];
        for (int l = 1; l < L_; ++l) dst[l] += src[l];
      }
    }
    return tab;
  }

  int m_, r_, L_;
  long long big_d_;
  GreedyOptions opts_;
  Mask full_mask_;
  std::vector<int> assignment_;
  std::vector<Mask> block_mask_;
  std::vector<double> gdet_;
  std::vector<double> ntab_;
  std::vector<std::vector<double>> ztab_;
  std::vector<std::vector<double>> binom_;
};

}  // namespace

LiftedPoly lifted_conditional_char_poly(const VectorSystem& v, int r,
                                        const std::vector<int>& fixed,
                                        const GreedyOptions& opts) {
  if (static_cast<int>(fixed.size()) != v.size())
    throw InvalidInput("lifted_conditional_char_poly: fix vector length mismatch");
  LiftEvaluator ev(v, r, opts);
  for (int i = 0; i < v.size(); ++i) {
    if (fixed[i] < 0) continue;
    if (fixed[i] >= r) throw InvalidInput("lifted_conditional_char_poly: block out of range");
    ev.assign(i, fixed[i]);
  }
  return ev.eval(-1, -1);
}

}  // namespace detail

namespace {

std::vector<double> per_block_bessel_bounds(const VectorSystem& v,
                                            const Partition& p) {
  std::vector<double> out(p.block_count, 0.0);
  const auto blocks = p.blocks();
  for (int k = 0; k < p.block_count; ++k) {
    if (blocks[k].empty()) continue;
    out[k] = operator_norm(frame_operator(v.subsystem(blocks[k])));
  }
  return out;
}

double weaver_bound(int r, double delta) {
  const double a = 1.0 / std::sqrt(static_cast<double>(r)) + std::sqrt(std::max(delta, 0.0));
  return a * a;
}

}  // namespace

PartitionCertificate greedy_partition(const VectorSystem& v, int r,
                                      const GreedyOptions& opts) {
  if (r < 1) throw InvalidInput("greedy_partition: r must be >= 1");
  const int m = v.size();
  const double delta = v.max_norm_squared();

  Matrix dev = frame_operator(v).mat() - Matrix::identity(v.dim());
  const bool parseval = operator_norm(HermitianMatrix(dev, 1e-9)) <= tol::kParseval;

  const VectorSystem* work = &v;
  VectorSystem extended(1, {Cvector(1)});
  bool parseval_certified = true;
  if (!parseval) {
    extended = extend_to_parseval(v);  // validates the Bessel bound
    if (extended.size() <= opts.max_subset_bits) {
      work = &extended;
    } else if (opts.allow_unextended_bessel) {
      parseval_certified = false;
    } else {
      throw BudgetExceeded("greedy_partition: Parseval extension needs " +
                           std::to_string(extended.size()) +
                           " vectors, above the subset budget");
    }
  }

  detail::LiftEvaluator ev(*work, r, opts);
  const int mw = work->size();
  std::vector<double> trace;
  trace.reserve(mw + 1);
  trace.push_back(ev.eval(-1, -1).max_root());

  std::vector<bool> block_used(r, false);
  for (int i = 0; i < mw; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_block = -1;
    bool tried_empty = false;
    for (int k = 0; k < r; ++k) {
      if (!block_used[k]) {
        if (tried_empty) continue;  // empty blocks are exchangeable
        tried_empty = true;
      }
      const double root = ev.eval(i, k).max_root();
      if (root < best) {
        best = root;
        best_block = k;
      }
    }
    ev.assign(i, best_block);
    block_used[best_block] = true;
    trace.push_back(best);
    if (trace[i + 1] > trace[i] + opts.trace_tolerance)
      throw InternalError("greedy_partition: maxroot trace increased at step " +
                          std::to_string(i));
  }

  PartitionCertificate cert;
  cert.partition.block_count = r;
  cert.partition.assignment.resize(m);
  for (int i = 0; i < m; ++i) cert.partition.assignment[i] = ev.assignment(i);
  cert.per_block_bessel = per_block_bessel_bounds(v, cert.partition);
  cert.delta = delta;
  cert.guaranteed_bound = weaver_bound(r, delta);
  cert.maxroot_trace = std::move(trace);
  cert.parseval_certified = parseval_certified;
  cert.ok = cert.max_bessel() <= cert.guaranteed_bound + 1e-9;
  return cert;
}

PartitionCertificate brute_force_partition(const VectorSystem& v, int r,
                                           const OracleOptions& opts) {
  if (r < 1) throw InvalidInput("brute_force_partition: r must be >= 1");
  const int m = v.size();
  const double total = std::pow(static_cast<double>(r), m);
  if (total > opts.max_assignments)
    throw BudgetExceeded("brute_force_partition: " + std::to_string(total) +
                         " assignments exceed the cap of " +
                         std::to_string(opts.max_assignments));

  const int d = v.dim();
  std::vector<Matrix> block_sum(r, Matrix(d, d));
  std::vector<int> assign(m, 0);
  std::vector<int> best_assign;
  double best = std::numeric_limits<double>::infinity();

  // depth-first over assignments, blocks labeled in first-use order
  std::vector<double> block_top(r, 0.0);
  auto block_norm = [&](int k) {
    return operator_norm(HermitianMatrix(block_sum[k], 1e-9));
  };
  std::vector<int> used_stack;
  auto rec = [&](auto&& self, int i, int used, double current_max) -> void {
    if (current_max >= best) return;
    if (i == m) {
      best = current_max;
      best_assign = assign;
      return;
    }
    const Cvector& u = v.vec(i);
    const int kmax = std::min(used, r - 1);
    for (int k = 0; k <= kmax; ++k) {
      Matrix saved = block_sum[k];
      const double saved_top = block_top[k];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) block_sum[k](a, b) += u[a] * std::conj(u[b]);
      block_top[k] = block_norm(k);
      assign[i] = k;
      self(self, i + 1, std::max(used, k + 1), std::max(current_max, block_top[k]));
      block_sum[k] = std::move(saved);
      block_top[k] = saved_top;
    }
  };
  rec(rec, 0, 0, 0.0);

  PartitionCertificate cert;
  cert.partition.block_count = r;
  cert.partition.assignment = best_assign;
  cert.per_block_bessel = per_block_bessel_bounds(v, cert.partition);
  cert.delta = v.max_norm_squared();
  cert.guaranteed_bound = weaver_bound(r, cert.delta);
  cert.ok = cert.max_bessel() <= cert.guaranteed_bound + 1e-9;
  return cert;
}

}  // namespace kspave
