#include "exact_solve.hpp"

#include <algorithm>
#include <stdexcept>

namespace gaudin::detail {

SVec svec_axpy(const SVec& x, const Rat& c, const SVec& y) {
  SVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i >= x.size() || y[j].first < x[i].first) {
      Rat v = c * y[j].second;
      if (sgn(v) != 0) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Rat v = x[i].second + c * y[j].second;
      if (sgn(v) != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

void svec_normalize_primitive(std::vector<Rat>& v) {
  Int den(1);
  for (const Rat& x : v)
    if (sgn(x) != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  Int content(0);
  std::vector<Int> scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * den;
    scaled[i] = s.get_num();  // integral by construction
    if (sgn(scaled[i]) != 0)
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled[i].get_mpz_t());
  }
  if (sgn(content) == 0) return;  // zero vector
  int lead_sign = 0;
  for (const Int& x : scaled)
    if (sgn(x) != 0) {
      lead_sign = sgn(x);
      break;
    }
  if (lead_sign < 0) content = -content;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rat(scaled[i] / content);
}

std::vector<std::vector<Int>> integer_kernel(std::vector<std::vector<Int>> m,
                                             int rows, int cols) {
  // Fraction-free row echelon (Bareiss): after step k every entry stays an
  // exact integer because the division by the previous pivot is exact.
  std::vector<int> pivot_row_of_col(cols, -1);
  std::vector<int> pivot_cols;
  Int prev(1);
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = -1;
    for (int r = rank; r < rows; ++r)
      if (sgn(m[r][c]) != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[rank]);
    const Int piv = m[rank][c];
    for (int r = rank + 1; r < rows; ++r) {
      if (sgn(m[r][c]) == 0 && sgn(prev) != 0) {
        // Still rescale the row to keep the fraction-free invariant.
        for (int j = c; j < cols; ++j) {
          Int t = piv * m[r][j];
          mpz_divexact(m[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        }
        continue;
      }
      const Int head = m[r][c];
      for (int j = c; j < cols; ++j) {
        Int t = piv * m[r][j] - head * m[rank][j];
        mpz_divexact(m[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = piv;
    pivot_row_of_col[c] = rank;
    pivot_cols.push_back(c);
    ++rank;
  }

  std::vector<std::vector<Int>> kernel;
  for (int f = 0; f < cols; ++f) {
    if (pivot_row_of_col[f] >= 0) continue;
    // Back-substitute x_f = 1, other free variables 0.
    std::vector<Rat> x(cols, Rat(0));
    x[f] = 1;
    for (int k = rank - 1; k >= 0; --k) {
      const int pc = pivot_cols[k];
      if (pc > f) continue;
      Rat s(0);
      for (int j = pc + 1; j < cols; ++j)
        if (sgn(x[j]) != 0) s += Rat(m[k][j]) * x[j];
      x[pc] = -s / Rat(m[k][pc]);
    }
    svec_normalize_primitive(x);
    std::vector<Int> xi(cols);
    for (int j = 0; j < cols; ++j) xi[j] = x[j].get_num();
    kernel.push_back(std::move(xi));
  }
  return kernel;
}

SpanSolver::SpanSolver(long length, const std::vector<SVec>& vectors)
    : length_(length) {
  pivot_.assign(vectors.size(), -1);
  echelon_of_.assign(vectors.size(), -1);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    SVec w = vectors[i];
    std::vector<Rat> t(vectors.size(), Rat(0));
    t[i] = 1;
    for (std::size_t e = 0; e < reduced_.size(); ++e) {
      const long p = reduced_[e].empty() ? -1 : reduced_[e].front().first;
      auto it = std::lower_bound(
          w.begin(), w.end(), p,
          [](const std::pair<long, Rat>& a, long pos) { return a.first < pos; });
      if (it == w.end() || it->first != p) continue;
      Rat c = -it->second / reduced_[e].front().second;
      w = svec_axpy(w, c, reduced_[e]);
      for (std::size_t j = 0; j < vectors.size(); ++j)
        if (sgn(trans_[e][j]) != 0) t[j] += c * trans_[e][j];
    }
    if (w.empty()) continue;  // dependent on earlier vectors
    pivot_[i] = w.front().first;
    echelon_of_[i] = static_cast<int>(reduced_.size());
    reduced_.push_back(std::move(w));
    trans_.push_back(std::move(t));
    ++rank_;
  }
}

std::optional<std::vector<Rat>> SpanSolver::solve(const SVec& v) const {
  SVec w = v;
  std::vector<Rat> c_red(reduced_.size(), Rat(0));
  for (std::size_t e = 0; e < reduced_.size(); ++e) {
    const long p = reduced_[e].front().first;
    auto it = std::lower_bound(
        w.begin(), w.end(), p,
        [](const std::pair<long, Rat>& a, long pos) { return a.first < pos; });
    if (it == w.end() || it->first != p) continue;
    Rat c = it->second / reduced_[e].front().second;
    c_red[e] = c;
    w = svec_axpy(w, -c, reduced_[e]);
  }
  if (!w.empty()) return std::nullopt;
  std::vector<Rat> out(pivot_.size(), Rat(0));
  for (std::size_t e = 0; e < reduced_.size(); ++e) {
    if (sgn(c_red[e]) == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      if (sgn(trans_[e][j]) != 0) out[j] += c_red[e] * trans_[e][j];
  }
  return out;
}

}  // namespace gaudin::detail
