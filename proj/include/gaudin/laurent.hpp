#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaudin/linop.hpp"

namespace gaudin {

/// Raised when a series operation would push a nonzero coefficient below the
/// retained window. Carries the window that would have been needed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int required_lo)
      : std::runtime_error(what), required_lo(required_lo) {}
  int required_lo = 0;
};

/// Truncated operator-valued Laurent series around a rational base point:
/// sum of coeff(e) * (w - base)^e for e in [lo, hi]. Coefficients outside the
/// window on the high side are dropped (truncation); producing a nonzero
/// coefficient below lo raises TruncationError instead, so the retained
/// principal part is always exact.
class TruncLaurent {
 public:
  TruncLaurent(Rat base, int lo, int hi, int dim);

  static TruncLaurent constant(const LinOp& op, Rat base, int lo, int hi);

  const Rat& base() const { return base_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int dim() const { return dim_; }

  /// Nonzero coefficients only.
  const std::map<int, LinOp>& coefficients() const { return coeff_; }
  LinOp coeff(int e) const;  // zero operator when absent
  bool has_coeff(int e) const { return coeff_.count(e) != 0; }

  void add_coeff(int e, const LinOp& op);  // accumulates; drops above hi

  bool is_zero() const { return coeff_.empty(); }
  bool same_window(const TruncLaurent& other) const;

  TruncLaurent derivative() const;  // d/dw

  friend TruncLaurent add(const TruncLaurent& a, const TruncLaurent& b);
  friend TruncLaurent sub(const TruncLaurent& a, const TruncLaurent& b);
  friend TruncLaurent negate(const TruncLaurent& a);
  friend TruncLaurent scale(const Rat& c, const TruncLaurent& a);
  friend TruncLaurent mul(const TruncLaurent& a, const TruncLaurent& b);

  bool operator==(const TruncLaurent& other) const;

 private:
  Rat base_;
  int lo_ = 0, hi_ = 0;
  int dim_ = 0;
  std::map<int, LinOp> coeff_;
};

/// Polynomial differential operator sum_d coeff(d) * D^d with truncated
/// Laurent coefficients, D = d/dw. Composition follows D o c = c D + c'.
class DiffOp {
 public:
  DiffOp(Rat base, int lo, int hi, int dim);  // zero operator of order -1

  static DiffOp from_series(const TruncLaurent& c0);  // order 0
  int order() const { return static_cast<int>(coeff_.size()) - 1; }
  const TruncLaurent& coeff(int d) const;
  TruncLaurent& mutable_coeff(int d);
  void set_coeff(int d, TruncLaurent series);

  Rat base() const { return base_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int dim() const { return dim_; }

  /// True when the leading coefficient is the constant identity series.
  bool is_monic() const;

  friend DiffOp add(const DiffOp& a, const DiffOp& b);
  friend DiffOp negate(const DiffOp& a);
  /// Operator composition a o b with the Leibniz rule.
  friend DiffOp mul(const DiffOp& a, const DiffOp& b);

 private:
  void trim();

  Rat base_;
  int lo_ = 0, hi_ = 0;
  int dim_ = 0;
  std::vector<TruncLaurent> coeff_;  // index = power of D
};

}  // namespace gaudin
