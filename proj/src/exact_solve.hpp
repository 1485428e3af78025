#pragma once

// Internal exact elimination routines shared by the kernel, span and
// restriction code paths. Not part of the public headers.

#include <optional>
#include <utility>
#include <vector>

#include "gaudin/rational.hpp"

namespace gaudin::detail {

// Sparse vector: (position, value) sorted by position, no zeros.
using SVec = std::vector<std::pair<long, Rat>>;

SVec svec_axpy(const SVec& x, const Rat& c, const SVec& y);  // x + c*y
void svec_normalize_primitive(std::vector<Rat>& v);  // integer, content 1, leading > 0

/// Null space of a dense integer matrix via fraction-free (Bareiss)
/// elimination. Pivot choice: scan columns left to right, take the first
/// unused row with a nonzero entry. Returned vectors (length = cols) are
/// integer, content 1, leading entry positive, ordered by free column.
std::vector<std::vector<Int>> integer_kernel(std::vector<std::vector<Int>> m,
                                             int rows, int cols);

/// Incremental exact echelon over a fixed list of (possibly dependent)
/// vectors, supporting repeated span-membership solves.
class SpanSolver {
 public:
  SpanSolver(long length, const std::vector<SVec>& vectors);

  /// Coefficients c with sum_i c_i * vectors[i] == v, or nullopt when v lies
  /// outside the span. Vectors that were dependent on earlier ones always
  /// receive coefficient 0.
  std::optional<std::vector<Rat>> solve(const SVec& v) const;

  int rank() const { return rank_; }
  int count() const { return static_cast<int>(pivot_.size()); }

 private:
  long length_ = 0;
  int rank_ = 0;
  std::vector<SVec> reduced_;  // echelon vectors (only the independent ones)
  std::vector<long> pivot_;    // per input vector: pivot position or -1
  std::vector<int> echelon_of_;  // per input vector: index into reduced_ or -1
  // trans_[e][i]: original-basis coefficient i of echelon vector e.
  std::vector<std::vector<Rat>> trans_;
};

}  // namespace gaudin::detail
