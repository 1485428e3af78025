#pragma once

#include <string>
#include <vector>

#include "gaudin/family.hpp"
#include "gaudin/repspace.hpp"

namespace gaudin {

/// Permutation of the tensor slots together with its operator on the space
/// (all factors must be the standard module). perm[s] is the 0-based image
/// of slot s; the operator moves the vector in slot s to slot perm[s].
struct PermOp {
  std::vector<int> perm;
  LinOp op;
};

PermOp make_perm_op(const TensorSpace& space, std::vector<int> perm);

/// Group composition: (a o b).perm[s] = a.perm[b.perm[s]], with the operator
/// product matching.
PermOp compose(const PermOp& a, const PermOp& b);

/// Basis-permuting operator swapping slots i and j (0-based). On standard
/// factors this equals the split casimir between the two sites.
LinOp transposition(const TensorSpace& space, int i, int j);

/// Jucys-Murphy elements X_i = sum_{j<i} transposition(j, i) for i = 2..n,
/// labelled "X2".."Xn" (X_1 = 0 is omitted).
OperatorFamily jm_elements(const TensorSpace& space);

/// Content vectors (c_2,...,c_n) of the standard tableaux of a partition,
/// c_k = column - row (0-based) of the box holding k.
struct SYTContent {
  std::vector<int> partition;
  std::vector<std::vector<long>> contents;  // sorted lexicographically
};

SYTContent syt_contents(const std::vector<int>& partition);

/// Union of the content vectors over all partitions of n with at most
/// max_rows rows, sorted; the expected joint JM spectrum on the singular
/// subspace of (C^N)^(x n) with max_rows = N.
std::vector<std::vector<long>> expected_jm_tuples(int max_rows, int n);

struct JMSpectrumReport {
  bool pass = false;
  bool indeterminate = false;  // joint spectrum failed to settle
  int subspace_dim = 0;
  bool all_multiplicity_one = false;
  std::vector<std::vector<long>> observed;  // sorted tuples
  std::vector<std::vector<long>> expected;  // sorted tuples
  std::vector<std::string> notes;
};

/// Joint (X_2..X_n) spectrum on the singular subspace, rounded to integers
/// (roundness tolerance 1e-6) and compared against the standard-tableau
/// contents of partitions with at most N rows. Requires N >= n so that every
/// partition of n appears.
JMSpectrumReport jm_spectrum_check(const TensorSpace& space);

}  // namespace gaudin
