#include "gaudin/laurent.hpp"

#include <algorithm>

namespace gaudin {

TruncLaurent::TruncLaurent(Rat base, int lo, int hi, int dim)
    : base_(std::move(base)), lo_(lo), hi_(hi), dim_(dim) {
  if (lo > hi) throw std::invalid_argument("series window is empty");
  if (dim <= 0) throw std::invalid_argument("series dimension must be positive");
}

TruncLaurent TruncLaurent::constant(const LinOp& op, Rat base, int lo, int hi) {
  TruncLaurent s(std::move(base), lo, hi, op.dim());
  s.add_coeff(0, op);
  return s;
}

LinOp TruncLaurent::coeff(int e) const {
  auto it = coeff_.find(e);
  if (it == coeff_.end()) return LinOp::zeros(dim_);
  return it->second;
}

void TruncLaurent::add_coeff(int e, const LinOp& op) {
  if (op.dim() != dim_) throw std::invalid_argument("coefficient dimension mismatch");
  if (op.is_zero()) return;
  if (e > hi_) return;  // high-side truncation
  if (e < lo_)
    throw TruncationError(
        "nonzero coefficient at exponent " + std::to_string(e) +
            " falls below the retained window [" + std::to_string(lo_) + ", " +
            std::to_string(hi_) + "]",
        e);
  auto it = coeff_.find(e);
  if (it == coeff_.end()) {
    coeff_.emplace(e, op);
  } else {
    it->second = gaudin::add(it->second, op);
    if (it->second.is_zero()) coeff_.erase(it);
  }
}

bool TruncLaurent::same_window(const TruncLaurent& other) const {
  return base_ == other.base_ && lo_ == other.lo_ && hi_ == other.hi_ &&
         dim_ == other.dim_;
}

TruncLaurent TruncLaurent::derivative() const {
  TruncLaurent out(base_, lo_, hi_, dim_);
  for (const auto& [e, op] : coeff_) {
    if (e == 0) continue;  // derivative of the constant term vanishes
    out.add_coeff(e - 1, scale(Rat(e), op));
  }
  return out;
}

TruncLaurent add(const TruncLaurent& a, const TruncLaurent& b) {
  if (!a.same_window(b)) throw std::invalid_argument("series windows differ");
  TruncLaurent out = a;
  for (const auto& [e, op] : b.coeff_) out.add_coeff(e, op);
  return out;
}

TruncLaurent negate(const TruncLaurent& a) { return scale(Rat(-1), a); }

TruncLaurent sub(const TruncLaurent& a, const TruncLaurent& b) {
  return add(a, negate(b));
}

TruncLaurent scale(const Rat& c, const TruncLaurent& a) {
  TruncLaurent out(a.base_, a.lo_, a.hi_, a.dim_);
  if (sgn(c) == 0) return out;
  for (const auto& [e, op] : a.coeff_) out.coeff_.emplace(e, scale(c, op));
  return out;
}

TruncLaurent mul(const TruncLaurent& a, const TruncLaurent& b) {
  if (!a.same_window(b)) throw std::invalid_argument("series windows differ");
  TruncLaurent out(a.base_, a.lo_, a.hi_, a.dim_);
  for (const auto& [ea, oa] : a.coeff_)
    for (const auto& [eb, ob] : b.coeff_) {
      const int e = ea + eb;
      if (e > a.hi_) continue;  // truncated high side
      // below-window products raise through add_coeff
      out.add_coeff(e, mul(oa, ob));
    }
  return out;
}

bool TruncLaurent::operator==(const TruncLaurent& other) const {
  return same_window(other) && coeff_ == other.coeff_;
}

DiffOp::DiffOp(Rat base, int lo, int hi, int dim)
    : base_(std::move(base)), lo_(lo), hi_(hi), dim_(dim) {}

DiffOp DiffOp::from_series(const TruncLaurent& c0) {
  DiffOp op(c0.base(), c0.lo(), c0.hi(), c0.dim());
  op.coeff_.push_back(c0);
  op.trim();
  return op;
}

const TruncLaurent& DiffOp::coeff(int d) const {
  if (d < 0 || d >= static_cast<int>(coeff_.size()))
    throw std::out_of_range("differential order out of range");
  return coeff_[d];
}

TruncLaurent& DiffOp::mutable_coeff(int d) {
  if (d < 0 || d >= static_cast<int>(coeff_.size()))
    throw std::out_of_range("differential order out of range");
  return coeff_[d];
}

void DiffOp::set_coeff(int d, TruncLaurent series) {
  if (d < 0) throw std::out_of_range("differential order must be >= 0");
  while (static_cast<int>(coeff_.size()) <= d)
    coeff_.emplace_back(base_, lo_, hi_, dim_);
  coeff_[d] = std::move(series);
  trim();
}

bool DiffOp::is_monic() const {
  if (coeff_.empty()) return false;
  const TruncLaurent& top = coeff_.back();
  if (top.coefficients().size() != 1) return false;
  const auto& [e, op] = *top.coefficients().begin();
  return e == 0 && op == LinOp::identity(dim_);
}

void DiffOp::trim() {
  while (!coeff_.empty() && coeff_.back().is_zero()) coeff_.pop_back();
}

DiffOp add(const DiffOp& a, const DiffOp& b) {
  if (a.base_ != b.base_ || a.lo_ != b.lo_ || a.hi_ != b.hi_ || a.dim_ != b.dim_)
    throw std::invalid_argument("differential operator windows differ");
  DiffOp out(a.base_, a.lo_, a.hi_, a.dim_);
  const int order = std::max(a.order(), b.order());
  for (int d = 0; d <= order; ++d) {
    TruncLaurent s(a.base_, a.lo_, a.hi_, a.dim_);
    if (d <= a.order()) s = add(s, a.coeff_[d]);
    if (d <= b.order()) s = add(s, b.coeff_[d]);
    out.set_coeff(d, std::move(s));
  }
  out.trim();
  return out;
}

DiffOp negate(const DiffOp& a) {
  DiffOp out = a;
  for (TruncLaurent& c : out.coeff_) c = negate(c);
  return out;
}

DiffOp mul(const DiffOp& a, const DiffOp& b) {
  if (a.base_ != b.base_ || a.lo_ != b.lo_ || a.hi_ != b.hi_ || a.dim_ != b.dim_)
    throw std::invalid_argument("differential operator windows differ");
  DiffOp out(a.base_, a.lo_, a.hi_, a.dim_);
  // a_d D^d o b_e D^e = sum_j C(d, j) a_d b_e^{(j)} D^{d - j + e}
  for (int d = 0; d <= a.order(); ++d) {
    if (a.coeff_[d].is_zero()) continue;
    for (int e = 0; e <= b.order(); ++e) {
      if (b.coeff_[e].is_zero()) continue;
      TruncLaurent deriv = b.coeff_[e];
      Rat binom(1);
      for (int j = 0; j <= d; ++j) {
        if (j > 0) {
          deriv = deriv.derivative();
          binom = binom * Rat(d - j + 1) / Rat(j);
        }
        if (deriv.is_zero()) continue;
        TruncLaurent term = mul(a.coeff_[d], deriv);
        if (sgn(binom - 1) != 0) term = scale(binom, term);
        const int target = d - j + e;
        TruncLaurent acc(a.base_, a.lo_, a.hi_, a.dim_);
        if (target <= out.order()) acc = out.coeff_[target];
        out.set_coeff(target, add(acc, term));
      }
    }
  }
  out.trim();
  return out;
}

}  // namespace gaudin
