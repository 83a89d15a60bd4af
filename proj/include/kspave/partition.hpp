#pragma once

// The constructive interlacing-family partitioner: block lifting of a vector
// system into a random rank-one model, greedy conditioning that never
// increases the expected-polynomial maxroot, Parseval extension of Bessel
// systems, and a brute-force oracle.

#include <cstdint>
#include <vector>

#include "kspave/mixed_char.hpp"

namespace kspave {

struct Partition {
  int block_count = 0;
  std::vector<int> assignment;  // index -> block in [0, block_count)

  std::vector<std::vector<int>> blocks() const;
  void validate() const;
};

// Common refinement {A_i cap B_j}; block (a, b) -> a * p2.block_count + b.
// Empty intersections are retained as empty blocks.
Partition refine(const Partition& p1, const Partition& p2);

struct PartitionCertificate {
  Partition partition;
  std::vector<double> per_block_bessel;  // lambda_max of sum_{i in I_k} u_i u_i*
  double delta = 0.0;                    // max ||u_i||^2
  double guaranteed_bound = 0.0;         // (1/sqrt(r) + sqrt(delta))^2
  std::vector<double> maxroot_trace;     // greedy diagnostic; empty for the oracle
  // Whether the greedy ran on a Parseval system (directly or through an
  // extension). When false the partition is still valid but the guarantee
  // above is not backed by the Parseval hypothesis.
  bool parseval_certified = true;
  bool ok = false;  // max(per_block_bessel) <= guaranteed_bound + 1e-9

  double max_bessel() const;
};

// Random model in dimension r*d: index i takes the value sqrt(r) u_i placed
// in block slot k in [r], each with probability 1/r.
RandomRankOneModel lift_to_blocks(const VectorSystem& v, int r);

// Appends scaled eigenvectors of I - frame_operator(v), each split into
// equal-norm copies of norm^2 <= max ||u_i||^2, making the system Parseval
// within 1e-8. Original indices are preserved as a prefix. Requires Bessel
// bound <= 1 + 1e-10.
VectorSystem extend_to_parseval(const VectorSystem& v);

struct GreedyOptions {
  // Subset-transform evaluator works over 2^m masks; systems (after any
  // Parseval extension) beyond this size are rejected.
  int max_subset_bits = 18;
  // Memory guard for the evaluator tables, in bytes.
  double max_table_bytes = 7.5e8;
  double trace_tolerance = 1e-8;
  // For Bessel inputs whose Parseval extension would exceed max_subset_bits,
  // run the greedy on the unextended system instead of failing. The
  // certificate is then marked not Parseval-certified.
  bool allow_unextended_bessel = true;
};

// Greedy interlacing selection: indices are processed in input order; at each
// step the block whose conditioned expected characteristic polynomial has the
// smallest maxroot is chosen (ties to the lowest block index). The recorded
// maxroot trace is non-increasing; a violation is an internal error.
PartitionCertificate greedy_partition(const VectorSystem& v, int r,
                                      const GreedyOptions& opts = {});

struct OracleOptions {
  double max_assignments = 1e6;  // r^m cap
};

// Exhaustively minimizes the max per-block Bessel bound.
PartitionCertificate brute_force_partition(const VectorSystem& v, int r,
                                           const OracleOptions& opts = {});

namespace detail {

// mu(z) = z^zero_multiplicity * core(z) for the conditioned lifted model;
// the core carries every nonzero root.
struct LiftedPoly {
  RealPolynomial core;
  int zero_multiplicity = 0;

  double max_root() const;
};

// Exact conditioned expected characteristic polynomial of the r-block lift
// of v. fixed[i] in [0, r) pins index i to that block; -1 leaves it random.
// Equals conditional_expected_char_poly on lift_to_blocks(v, r) but runs on
// Gram-minor subset transforms, so it stays cheap even when r*dim is large.
LiftedPoly lifted_conditional_char_poly(const VectorSystem& v, int r,
                                        const std::vector<int>& fixed,
                                        const GreedyOptions& opts = {});

}  // namespace detail

}  // namespace kspave
