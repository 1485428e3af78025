#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gaudin/rational.hpp"

namespace gaudin {

enum class Field { rational, complex64 };

using Cplx = std::complex<double>;

// One matrix row in sparse form: (column, value) sorted by column, no
// explicit zeros.
using RatRow = std::vector<std::pair<int, Rat>>;

/// Square operator on a finite-dimensional space, either with exact rational
/// entries (sparse rows) or complex double entries (dense, row-major).
/// Immutable after construction; all operations below are pure.
class LinOp {
 public:
  LinOp() = default;

  static LinOp zeros(int dim, Field field = Field::rational);
  static LinOp identity(int dim, Field field = Field::rational);
  static LinOp scalar(int dim, const Rat& value);
  /// Duplicate (row, col) triplets are summed; zeros dropped.
  static LinOp from_triplets(int dim,
                             const std::vector<std::tuple<int, int, Rat>>& entries);
  /// Rows must be sorted by column and free of zeros.
  static LinOp from_rows(int dim, std::vector<RatRow> rows);
  static LinOp from_complex_dense(int dim, std::vector<Cplx> values);

  int dim() const { return dim_; }
  Field field() const { return field_; }
  bool is_rational() const { return field_ == Field::rational; }

  const RatRow& rat_row(int r) const;
  const std::vector<RatRow>& rat_rows() const;
  Rat rat_entry(int r, int c) const;
  Cplx cplx_entry(int r, int c) const;
  const std::vector<Cplx>& cplx_data() const;

  std::size_t nnz() const;
  bool is_zero() const;
  double density() const;

  LinOp to_complex() const;

  /// Sum of squared entries (rational field only).
  Rat frobenius_sq() const;
  double frobenius() const;
  /// Largest |entry| (rational field only); 0 for the zero operator.
  Rat max_abs() const;

  bool operator==(const LinOp& other) const;
  bool operator!=(const LinOp& other) const { return !(*this == other); }

 private:
  int dim_ = 0;
  Field field_ = Field::rational;
  std::vector<RatRow> rows_;   // rational storage
  std::vector<Cplx> cdata_;    // complex storage, dim*dim row-major
};

LinOp add(const LinOp& a, const LinOp& b);
LinOp sub(const LinOp& a, const LinOp& b);
LinOp negate(const LinOp& a);
LinOp scale(const Rat& c, const LinOp& a);
LinOp scale_cplx(Cplx c, const LinOp& a);
LinOp mul(const LinOp& a, const LinOp& b);
/// a*b - b*a. Rational inputs take an overflow-checked integer fast path
/// (common-denominator scaling, 128-bit accumulation) and fall back to plain
/// rational arithmetic when the entries are too large.
LinOp commutator(const LinOp& a, const LinOp& b);
/// Kronecker product; the left factor indexes the slow axis.
LinOp kron(const LinOp& a, const LinOp& b);

/// Null-space basis via fraction-free (integer-preserving) elimination with
/// deterministic pivoting. Vectors have integer entries with content 1 and
/// positive leading coefficient.
std::vector<std::vector<Rat>> exact_kernel(const LinOp& a);

struct SpanResult {
  bool member = false;
  std::vector<Rat> coeffs;     // rational path: exact coefficients
  std::vector<Cplx> coeffs_c;  // float path: least-squares coefficients
  double residual = 0.0;       // float path only
};

/// Membership of `target` in the linear span of `basis`, treating operators
/// as vectors. Exact for rational inputs; least squares with relative
/// residual <= 1e-10 for complex inputs.
SpanResult in_span(const LinOp& target, const std::vector<LinOp>& basis);

struct EigenResult {
  std::vector<Cplx> values;
  std::vector<Cplx> vectors;  // dim*dim row-major; column j pairs with values[j]
  double max_residual = 0.0;  // max_j |A v_j - lambda_j v_j| / |A|
  double cond_estimate = 1.0; // condition number of the eigenvector matrix
  bool well_conditioned = true;  // cond_estimate <= 1e8

  std::vector<Cplx> eigenvector(int j) const;
};

/// Dense eigen-decomposition (complex field only). Throws on non-convergence
/// or when residuals exceed 1e-9 * |A|; ill-conditioning is reported through
/// the flags, never silently accepted.
EigenResult eigen(const LinOp& a);

/// Tolerance clustering by transitive closure of |x - y| <= tol * scale with
/// scale = max(1, max |value|). Returns index groups, each sorted, in order
/// of first appearance.
std::vector<std::vector<int>> cluster(const std::vector<Cplx>& values, double tol);

/// Monic characteristic polynomial coefficients c[0..dim], c[dim] = 1
/// (rational field; intended for small matrices).
std::vector<Rat> char_poly(const LinOp& a);

}  // namespace gaudin
