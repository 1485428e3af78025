#pragma once

#include <string>
#include <vector>

#include "gaudin/linop.hpp"

namespace gaudin {

/// Finite-dimensional gl_N module given by explicit generator matrices.
/// gen(i, j) is the matrix of E_ij (0-based indices).
struct ModuleRep {
  int n_gl = 0;   // the N of gl_N
  int dim = 0;
  std::string label;
  std::vector<LinOp> generators;  // N*N entries, row-major (i, j)

  const LinOp& gen(int i, int j) const;
};

/// Standard (vector) module C^N: E_ij = matrix unit.
ModuleRep standard_module(int N);

/// Symmetric power S^m(C^N). Basis: monomials of degree m in descending
/// lexicographic exponent order, so x_1^m comes first; E_ij acts as x_i d/dx_j.
ModuleRep symmetric_power(int N, int m);

/// Tensor product of the factors with E_ij = sum of the per-site actions,
/// packaged as a single module (used for gluing several sites into one).
ModuleRep diag_composite(const std::vector<ModuleRep>& factors);

/// Spot-checks [E_ij, E_kl] = delta_jk E_il - delta_li E_kj on the module.
/// Exhaustive for N <= 3, sampled otherwise.
bool check_gl_relations(const ModuleRep& rep, bool exhaustive = false);

/// Ordered tensor product V_1 (x) ... (x) V_n with the mixed-radix index
/// codec: site 1 is the slowest digit.
class TensorSpace {
 public:
  explicit TensorSpace(std::vector<ModuleRep> factors);

  int dim() const { return dim_; }
  int sites() const { return static_cast<int>(factors_.size()); }
  int n_gl() const { return n_gl_; }
  const ModuleRep& factor(int site) const { return factors_.at(site); }

  long index_of(const std::vector<int>& digits) const;
  std::vector<int> digits_of(long index) const;

  /// E_ij acting on one tensor slot, identity elsewhere.
  LinOp embed_at_site(int site, int i, int j) const;
  /// Operator on the site factor embedded into the full space.
  LinOp embed_op_at_site(int site, const LinOp& op) const;
  /// Diagonal action: sum over sites of embed_at_site(site, i, j).
  LinOp diagonal_gen(int i, int j) const;

  /// Weight of each basis vector under the diagonal Cartan subalgebra, read
  /// off the exact diagonal generator matrices (which must be diagonal).
  std::vector<std::vector<long>> basis_weights() const;

  /// Basis of the joint kernel of the diagonal raising operators
  /// E_{i,i+1}; vectors have integer entries with content 1 and are grouped
  /// by weight. Computed blockwise per weight subspace.
  std::vector<std::vector<Rat>> singular_subspace() const;

 private:
  std::vector<ModuleRep> factors_;
  int dim_ = 1;
  int n_gl_ = 0;
  std::vector<long> strides_;
};

/// Gelfand invariants of a generator array: for l = 1..upto_l the sum over
/// cyclic index tuples gen(i1,i2) gen(i2,i3) ... gen(il,i1). For the diagonal
/// action of gl_N these are the central Casimir elements.
std::vector<LinOp> gelfand_invariants(const std::vector<LinOp>& gens, int N,
                                      int upto_l);

}  // namespace gaudin
