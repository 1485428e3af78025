#pragma once

#include <string>
#include <vector>

#include "gaudin/family.hpp"
#include "gaudin/laurent.hpp"
#include "gaudin/repspace.hpp"

namespace gaudin {

/// Marked points on the line, one per tensor site, pairwise distinct.
struct SitePoints {
  std::vector<Rat> z;

  explicit SitePoints(std::vector<Rat> points);
  int count() const { return static_cast<int>(z.size()); }
};

/// Split Casimir between two sites: sum_{p,q} E_pq^{(i)} E_qp^{(j)} built
/// from trace-form dual bases of matrix units.
LinOp split_casimir(const TensorSpace& space, int i, int j);

/// Quadratic hamiltonians H_i = sum_{k != i} split_casimir(i, k)/(z_i - z_k).
/// The members sum to zero exactly.
OperatorFamily quadratic_family(const TensorSpace& space, const SitePoints& z);

/// N x N array (row-major) of series expansions of the one-form
/// L(w)_pq = sum_k E_pq^{(k)} / (w - z_k) around the pole z[pole]; the
/// residue sits at exponent -1 and the regular part is expanded to `hi`.
/// The retained window is [lo, hi].
std::vector<TruncLaurent> lax_series(const TensorSpace& space,
                                     const SitePoints& z, int pole, int lo,
                                     int hi);

/// Column-ordered determinant of D*Id - L for the given Lax entry series:
/// sum over permutations s of sgn(s) * M[s(1),1] o ... o M[s(N),N] with
/// M[p][q] = delta_pq * D - L_pq, composed by ascending column. The result
/// is monic of order N.
DiffOp column_det(const std::vector<TruncLaurent>& lax, int N);

/// Commuting generator family from the column determinant: for each pole the
/// principal-part coefficients of the D^(N-l) term at orders 1..l (orders
/// 1..l-1 are omitted at the last pole, where they are dependent), together
/// with the Gelfand invariants of the diagonal action. Generators are
/// meaningful up to scalars (and shifts by lower-order central terms).
/// trunc >= 2N required; every retained coefficient is recomputed at window
/// hi + 2 and compared, so an undersized window is an error, never silence.
OperatorFamily extract_generators(const TensorSpace& space, const SitePoints& z,
                                  int trunc = -1);

}  // namespace gaudin
