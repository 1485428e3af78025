#pragma once

#include <string>
#include <vector>

#include "gaudin/family.hpp"
#include "gaudin/gaudin_family.hpp"
#include "gaudin/repspace.hpp"

namespace gaudin {

/// Polynomials of total degree d in the N*M variables x_{ia}, i < N (row),
/// a < M (column). Basis: exponent matrices ordered by descending
/// lexicographic order of their row-major flattening, so x_{00}^d comes
/// first; dim = C(NM + d - 1, d).
///
/// Two commuting algebra actions by differential operators live here:
///   row_gen(i, j)     = sum_a x_{ia} d/dx_{ja}        (gl_N on the rows)
///   col_gen(a, b)     = sum_i x_{ia} d/dx_{ib}        (gl_M on the columns)
///   site_gen(a, i, j) = x_{ia} d/dx_{ja}              (a-th gl_N copy)
/// so row_gen(i, j) = sum_a site_gen(a, i, j) and col_gen(a, a) is the
/// degree operator of column a.
class PolySpace {
 public:
  PolySpace(int N, int M, int d);

  int rows() const { return n_; }
  int cols() const { return m_; }
  int degree() const { return d_; }
  int dim() const { return static_cast<int>(exps_.size()); }

  /// Flat row-major exponent vector of basis monomial idx, length N*M.
  const std::vector<int>& exponents(long idx) const { return exps_.at(idx); }
  long index_of(const std::vector<int>& exp) const;

  LinOp row_gen(int i, int j) const;
  LinOp col_gen(int a, int b) const;
  LinOp site_gen(int a, int i, int j) const;

 private:
  int n_ = 0, m_ = 0, d_ = 0;
  std::vector<std::vector<int>> exps_;
};

/// One column-degree block: the span of the monomials whose per-column
/// degrees equal `degrees`, identified basis by basis with the tensor
/// product S^{m_1}(C^N) (x) ... (x) S^{m_M}(C^N). Through the bijection the
/// a-th tensor site action equals site_gen(a, ., .), entry for entry.
struct MultidegreeComponent {
  std::vector<int> degrees;
  TensorSpace space;
  std::vector<long> poly_index;  // tensor basis index -> polynomial basis index
};

MultidegreeComponent multidegree_component(const PolySpace& p,
                                           const std::vector<int>& degrees);

/// All column-degree vectors (compositions of d into M parts), each one the
/// degree list of exactly one block; together the blocks partition the basis.
std::vector<std::vector<int>> all_multidegrees(int d, int M);

/// Restriction of a block-diagonal operator to one block, in tensor basis
/// order. Throws if the operator has an entry straddling the block boundary.
LinOp to_component(const MultidegreeComponent& c, const LinOp& op);

/// Embedding of a block operator back into the polynomial space (zero on the
/// other blocks).
LinOp from_component(int poly_dim, const MultidegreeComponent& c,
                     const LinOp& op);

/// Quadratic hamiltonians at marked points z_1..z_M, built on every
/// column-degree block through the tensor identification and assembled
/// blockwise. Labels "H1".."HM"; the members sum to zero.
OperatorFamily transported_quadratic(const PolySpace& p, const SitePoints& z);

/// Bending sums M_k = sum_{j>k} (split casimir of sites k, j) transported
/// the same way, k = 1..M-1. Labels "M1".."M{M-1}".
OperatorFamily transported_bending(const PolySpace& p);

/// The commuting quadratic column-action elements attached to pairwise
/// distinct z_1..z_M, one per diagonal unit h = e_c:
///   Q(e_c) = sum_{a<b} (delta_ca - delta_cb)/(z_a - z_b)
///            col_gen(a, b) col_gen(b, a).
/// Labels "Q[e1]".."Q[eM]"; the members sum to zero.
OperatorFamily qz_elements(const PolySpace& p, const SitePoints& z);

/// Gelfand invariants of the upper-left k x k corner subalgebras of the
/// column action: degrees l = 1..k for each k = 1..upto_k. Labels
/// "C{l}[1..{k}]". Together these cut out the full flag of corner centers.
OperatorFamily gt_casimirs(const PolySpace& p, int upto_k);

/// Exact two-way span comparison between the transported hamiltonians and
/// the quadratic column elements, modulo column degree operators and the
/// identity: every H_a must lie in span{Q members, deg_1..deg_M, Id} and
/// every Q member in span{H_1..H_M, deg_1..deg_M, Id}. The notes record the
/// exact correction coefficients of each successful expansion.
struct DualityReport {
  bool forward = false;
  bool backward = false;
  std::vector<std::string> notes;

  bool pass() const { return forward && backward; }
};

DualityReport duality_check(const PolySpace& p, const SitePoints& z);

/// Joint-eigenspace comparison between
///   side A: transported bending sums plus the sitewise Casimirs
///           (Gelfand invariants of each site_gen copy up to degree 2), and
///   side B: the corner Casimirs gt_casimirs(p, M).
/// The two decompositions must consist of the same subspaces; blocks are
/// matched one to one by orthogonal-projector distance (Frobenius norm,
/// tolerance 1e-8 after float conversion).
struct GtMatchReport {
  bool match = false;
  bool indeterminate = false;  // a joint spectrum failed to settle
  int blocks_a = 0;
  int blocks_b = 0;
  double max_projector_dist = 0.0;
  std::vector<std::string> notes;
};

GtMatchReport gt_match_check(const PolySpace& p);

}  // namespace gaudin
