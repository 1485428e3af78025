#include "gaudin/linop.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>

#include "exact_solve.hpp"

namespace gaudin {

namespace {

void check_square_index(int dim, int r, int c) {
  if (r < 0 || r >= dim || c < 0 || c >= dim)
    throw std::out_of_range("operator index out of range");
}

void check_same_shape(const LinOp& a, const LinOp& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  if (a.field() != b.field()) throw std::invalid_argument("operator fields differ");
}

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const LinOp& a) {
  EMat m(a.dim(), a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) m(r, c) = a.cplx_entry(r, c);
  return m;
}

LinOp from_eigen(const EMat& m) {
  const int d = static_cast<int>(m.rows());
  std::vector<Cplx> data(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) data[static_cast<std::size_t>(r) * d + c] = m(r, c);
  return LinOp::from_complex_dense(d, std::move(data));
}

Int int128_to_mpz(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  const std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
  const std::uint64_t lo = static_cast<std::uint64_t>(u);
  Int out(0);
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(hi), 0, 0, &hi);
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), 64);
  Int low(0);
  mpz_import(low.get_mpz_t(), 1, 1, sizeof(lo), 0, 0, &lo);
  out += low;
  return neg ? Int(-out) : out;
}

// Scales a rational operator to a common-denominator integer matrix. Fails
// (returns false) when any scaled entry exceeds the magnitude bound that
// keeps a dim-term dot product inside __int128.
bool try_scale_to_int(const LinOp& a, Int& den, std::vector<std::int64_t>& dense) {
  const int d = a.dim();
  den = 1;
  for (int r = 0; r < d; ++r)
    for (const auto& [c, v] : a.rat_row(r))
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
  constexpr std::int64_t kMagnitudeBound = std::int64_t(1) << 56;
  dense.assign(static_cast<std::size_t>(d) * d, 0);
  for (int r = 0; r < d; ++r)
    for (const auto& [c, v] : a.rat_row(r)) {
      Rat s = v * den;
      const Int& num = s.get_num();
      if (!num.fits_slong_p()) return false;
      const std::int64_t x = num.get_si();
      if (x >= kMagnitudeBound || x <= -kMagnitudeBound) return false;
      dense[static_cast<std::size_t>(r) * d + c] = x;
    }
  return true;
}

}  // namespace

LinOp LinOp::zeros(int dim, Field field) {
  if (dim <= 0) throw std::invalid_argument("operator dimension must be positive");
  LinOp a;
  a.dim_ = dim;
  a.field_ = field;
  if (field == Field::rational)
    a.rows_.resize(dim);
  else
    a.cdata_.assign(static_cast<std::size_t>(dim) * dim, Cplx(0.0, 0.0));
  return a;
}

LinOp LinOp::identity(int dim, Field field) {
  LinOp a = zeros(dim, field);
  for (int i = 0; i < dim; ++i) {
    if (field == Field::rational)
      a.rows_[i].emplace_back(i, Rat(1));
    else
      a.cdata_[static_cast<std::size_t>(i) * dim + i] = Cplx(1.0, 0.0);
  }
  return a;
}

LinOp LinOp::scalar(int dim, const Rat& value) {
  LinOp a = zeros(dim, Field::rational);
  if (sgn(value) != 0)
    for (int i = 0; i < dim; ++i) a.rows_[i].emplace_back(i, value);
  return a;
}

LinOp LinOp::from_triplets(int dim,
                           const std::vector<std::tuple<int, int, Rat>>& entries) {
  LinOp a = zeros(dim, Field::rational);
  std::vector<std::map<int, Rat>> acc(dim);
  for (const auto& [r, c, v] : entries) {
    check_square_index(dim, r, c);
    acc[r][c] += v;
  }
  for (int r = 0; r < dim; ++r)
    for (auto& [c, v] : acc[r])
      if (sgn(v) != 0) a.rows_[r].emplace_back(c, std::move(v));
  return a;
}

LinOp LinOp::from_rows(int dim, std::vector<RatRow> rows) {
  if (static_cast<int>(rows.size()) != dim)
    throw std::invalid_argument("row count does not match dimension");
  LinOp a;
  a.dim_ = dim;
  a.field_ = Field::rational;
  a.rows_ = std::move(rows);
  return a;
}

LinOp LinOp::from_complex_dense(int dim, std::vector<Cplx> values) {
  if (static_cast<std::size_t>(dim) * dim != values.size())
    throw std::invalid_argument("dense data does not match dimension");
  LinOp a;
  a.dim_ = dim;
  a.field_ = Field::complex64;
  a.cdata_ = std::move(values);
  return a;
}

const RatRow& LinOp::rat_row(int r) const {
  if (field_ != Field::rational)
    throw std::logic_error("rational row access on complex operator");
  return rows_.at(r);
}

const std::vector<RatRow>& LinOp::rat_rows() const {
  if (field_ != Field::rational)
    throw std::logic_error("rational row access on complex operator");
  return rows_;
}

Rat LinOp::rat_entry(int r, int c) const {
  check_square_index(dim_, r, c);
  const RatRow& row = rat_row(r);
  auto it = std::lower_bound(
      row.begin(), row.end(), c,
      [](const std::pair<int, Rat>& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return Rat(0);
}

Cplx LinOp::cplx_entry(int r, int c) const {
  check_square_index(dim_, r, c);
  if (field_ == Field::complex64)
    return cdata_[static_cast<std::size_t>(r) * dim_ + c];
  return Cplx(rat_entry(r, c).get_d(), 0.0);
}

const std::vector<Cplx>& LinOp::cplx_data() const {
  if (field_ != Field::complex64)
    throw std::logic_error("dense complex access on rational operator");
  return cdata_;
}

std::size_t LinOp::nnz() const {
  if (field_ == Field::rational) {
    std::size_t n = 0;
    for (const RatRow& row : rows_) n += row.size();
    return n;
  }
  std::size_t n = 0;
  for (const Cplx& v : cdata_)
    if (v != Cplx(0.0, 0.0)) ++n;
  return n;
}

bool LinOp::is_zero() const {
  if (field_ == Field::rational) {
    for (const RatRow& row : rows_)
      if (!row.empty()) return false;
    return true;
  }
  for (const Cplx& v : cdata_)
    if (v != Cplx(0.0, 0.0)) return false;
  return true;
}

double LinOp::density() const {
  return static_cast<double>(nnz()) /
         (static_cast<double>(dim_) * static_cast<double>(dim_));
}

LinOp LinOp::to_complex() const {
  if (field_ == Field::complex64) return *this;
  LinOp a = zeros(dim_, Field::complex64);
  for (int r = 0; r < dim_; ++r)
    for (const auto& [c, v] : rows_[r])
      a.cdata_[static_cast<std::size_t>(r) * dim_ + c] = Cplx(v.get_d(), 0.0);
  return a;
}

Rat LinOp::frobenius_sq() const {
  if (field_ != Field::rational)
    throw std::logic_error("exact Frobenius norm requires rational entries");
  Rat s(0);
  for (const RatRow& row : rows_)
    for (const auto& [c, v] : row) s += v * v;
  return s;
}

double LinOp::frobenius() const {
  if (field_ == Field::rational) return std::sqrt(frobenius_sq().get_d());
  double s = 0.0;
  for (const Cplx& v : cdata_) s += std::norm(v);
  return std::sqrt(s);
}

Rat LinOp::max_abs() const {
  if (field_ != Field::rational)
    throw std::logic_error("max_abs requires rational entries");
  Rat best(0);
  for (const RatRow& row : rows_)
    for (const auto& [c, v] : row) {
      Rat a = abs(v);
      if (a > best) best = a;
    }
  return best;
}

bool LinOp::operator==(const LinOp& other) const {
  if (dim_ != other.dim_ || field_ != other.field_) return false;
  if (field_ == Field::rational) return rows_ == other.rows_;
  return cdata_ == other.cdata_;
}

LinOp add(const LinOp& a, const LinOp& b) {
  check_same_shape(a, b);
  if (a.field() == Field::complex64) {
    std::vector<Cplx> data = a.cplx_data();
    const std::vector<Cplx>& bd = b.cplx_data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += bd[i];
    return LinOp::from_complex_dense(a.dim(), std::move(data));
  }
  std::vector<RatRow> rows(a.dim());
  for (int r = 0; r < a.dim(); ++r) {
    const RatRow& x = a.rat_row(r);
    const RatRow& y = b.rat_row(r);
    RatRow& out = rows[r];
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) {
        out.push_back(x[i++]);
      } else if (i >= x.size() || y[j].first < x[i].first) {
        out.push_back(y[j++]);
      } else {
        Rat v = x[i].second + y[j].second;
        if (sgn(v) != 0) out.emplace_back(x[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
  }
  return LinOp::from_rows(a.dim(), std::move(rows));
}

LinOp negate(const LinOp& a) {
  if (a.field() == Field::complex64) return scale_cplx(Cplx(-1.0, 0.0), a);
  return scale(Rat(-1), a);
}

LinOp sub(const LinOp& a, const LinOp& b) { return add(a, negate(b)); }

LinOp scale(const Rat& c, const LinOp& a) {
  if (a.field() == Field::complex64) return scale_cplx(Cplx(c.get_d(), 0.0), a);
  if (sgn(c) == 0) return LinOp::zeros(a.dim());
  std::vector<RatRow> rows(a.dim());
  for (int r = 0; r < a.dim(); ++r) {
    rows[r] = a.rat_row(r);
    for (auto& [col, v] : rows[r]) v *= c;
  }
  return LinOp::from_rows(a.dim(), std::move(rows));
}

LinOp scale_cplx(Cplx c, const LinOp& a) {
  LinOp x = a.to_complex();
  std::vector<Cplx> data = x.cplx_data();
  for (Cplx& v : data) v *= c;
  return LinOp::from_complex_dense(a.dim(), std::move(data));
}

LinOp mul(const LinOp& a, const LinOp& b) {
  check_same_shape(a, b);
  const int d = a.dim();
  if (a.field() == Field::complex64) return from_eigen(to_eigen(a) * to_eigen(b));
  std::vector<RatRow> rows(d);
  std::vector<Rat> acc(d, Rat(0));
  std::vector<bool> used(d, false);
  std::vector<int> touched;
  touched.reserve(64);
  for (int r = 0; r < d; ++r) {
    for (const auto& [k, v] : a.rat_row(r)) {
      for (const auto& [c, w] : b.rat_row(k)) {
        if (!used[c]) {
          used[c] = true;
          touched.push_back(c);
        }
        acc[c] += v * w;
      }
    }
    std::sort(touched.begin(), touched.end());
    RatRow& out = rows[r];
    out.reserve(touched.size());
    for (int c : touched) {
      if (sgn(acc[c]) != 0) out.emplace_back(c, std::move(acc[c]));
      acc[c] = 0;
      used[c] = false;
    }
    touched.clear();
  }
  return LinOp::from_rows(d, std::move(rows));
}

LinOp commutator(const LinOp& a, const LinOp& b) {
  check_same_shape(a, b);
  const int d = a.dim();
  if (a.field() == Field::rational && d > 1 && d <= 2048) {
    Int den_a, den_b;
    std::vector<std::int64_t> ia, ib;
    if (try_scale_to_int(a, den_a, ia) && try_scale_to_int(b, den_b, ib)) {
      // [a, b] = (ia*ib - ib*ia) / (den_a * den_b) with 128-bit accumulation;
      // |entries| < 2^56 and d <= 2^11 keep every dot product below 2^123.
      std::vector<__int128> acc(static_cast<std::size_t>(d) * d, 0);
      for (int i = 0; i < d; ++i) {
        const std::size_t ri = static_cast<std::size_t>(i) * d;
        for (int k = 0; k < d; ++k) {
          const std::int64_t x = ia[ri + k];
          if (x == 0) continue;
          const std::size_t rk = static_cast<std::size_t>(k) * d;
          for (int j = 0; j < d; ++j)
            if (ib[rk + j] != 0)
              acc[ri + j] += static_cast<__int128>(x) * ib[rk + j];
        }
      }
      for (int i = 0; i < d; ++i) {
        const std::size_t ri = static_cast<std::size_t>(i) * d;
        for (int k = 0; k < d; ++k) {
          const std::int64_t x = ib[ri + k];
          if (x == 0) continue;
          const std::size_t rk = static_cast<std::size_t>(k) * d;
          for (int j = 0; j < d; ++j)
            if (ia[rk + j] != 0)
              acc[ri + j] -= static_cast<__int128>(x) * ia[rk + j];
        }
      }
      const Int den = den_a * den_b;
      std::vector<RatRow> rows(d);
      for (int r = 0; r < d; ++r) {
        const std::size_t rr = static_cast<std::size_t>(r) * d;
        for (int c = 0; c < d; ++c) {
          if (acc[rr + c] == 0) continue;
          Rat v(int128_to_mpz(acc[rr + c]), den);
          v.canonicalize();
          rows[r].emplace_back(c, std::move(v));
        }
      }
      return LinOp::from_rows(d, std::move(rows));
    }
  }
  return sub(mul(a, b), mul(b, a));
}

LinOp kron(const LinOp& a, const LinOp& b) {
  if (a.field() != b.field())
    throw std::invalid_argument("operator fields differ");
  const int da = a.dim(), db = b.dim();
  const int d = da * db;
  if (a.field() == Field::complex64) {
    std::vector<Cplx> data(static_cast<std::size_t>(d) * d, Cplx(0.0, 0.0));
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j) {
        const Cplx av = a.cplx_entry(i, j);
        if (av == Cplx(0.0, 0.0)) continue;
        for (int k = 0; k < db; ++k)
          for (int l = 0; l < db; ++l) {
            const Cplx bv = b.cplx_entry(k, l);
            if (bv != Cplx(0.0, 0.0))
              data[static_cast<std::size_t>(i * db + k) * d + (j * db + l)] = av * bv;
          }
      }
    return LinOp::from_complex_dense(d, std::move(data));
  }
  std::vector<RatRow> rows(d);
  for (int i = 0; i < da; ++i)
    for (const auto& [j, av] : a.rat_row(i))
      for (int k = 0; k < db; ++k) {
        RatRow& out = rows[i * db + k];
        for (const auto& [l, bv] : b.rat_row(k)) out.emplace_back(j * db + l, av * bv);
      }
  for (RatRow& row : rows)
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  return LinOp::from_rows(d, std::move(rows));
}

std::vector<std::vector<Rat>> exact_kernel(const LinOp& a) {
  if (a.field() != Field::rational)
    throw std::invalid_argument("exact kernel requires rational entries");
  const int d = a.dim();
  // Row-scale to integers; scaling a row by a nonzero constant keeps the
  // kernel unchanged.
  std::vector<std::vector<Int>> m(d, std::vector<Int>(d, Int(0)));
  for (int r = 0; r < d; ++r) {
    Int den(1);
    for (const auto& [c, v] : a.rat_row(r))
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
    for (const auto& [c, v] : a.rat_row(r)) {
      Rat s = v * den;
      m[r][c] = s.get_num();
    }
  }
  auto basis = detail::integer_kernel(std::move(m), d, d);
  std::vector<std::vector<Rat>> out;
  out.reserve(basis.size());
  for (auto& v : basis) {
    std::vector<Rat> w(d);
    for (int i = 0; i < d; ++i) w[i] = Rat(v[i]);
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

detail::SVec vectorize(const LinOp& a) {
  detail::SVec v;
  v.reserve(a.nnz());
  for (int r = 0; r < a.dim(); ++r)
    for (const auto& [c, val] : a.rat_row(r))
      v.emplace_back(static_cast<long>(r) * a.dim() + c, val);
  return v;
}

SpanResult in_span_exact(const LinOp& target, const std::vector<LinOp>& basis) {
  std::vector<detail::SVec> vecs;
  vecs.reserve(basis.size());
  for (const LinOp& b : basis) {
    if (b.field() != Field::rational || b.dim() != target.dim())
      throw std::invalid_argument("span basis must match the target's shape and field");
    vecs.push_back(vectorize(b));
  }
  detail::SpanSolver solver(static_cast<long>(target.dim()) * target.dim(), vecs);
  auto sol = solver.solve(vectorize(target));
  SpanResult res;
  res.member = sol.has_value();
  if (sol) res.coeffs = std::move(*sol);
  return res;
}

SpanResult in_span_float(const LinOp& target, const std::vector<LinOp>& basis) {
  const int d = target.dim();
  const long rows = static_cast<long>(d) * d;
  EMat m(rows, static_cast<long>(basis.size()));
  Eigen::VectorXcd t(rows);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) t(static_cast<long>(r) * d + c) = target.cplx_entry(r, c);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].dim() != d)
      throw std::invalid_argument("span basis must match the target's shape");
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        m(static_cast<long>(r) * d + c, static_cast<long>(j)) =
            basis[j].cplx_entry(r, c);
  }
  SpanResult res;
  if (basis.empty()) {
    res.residual = t.norm();
    res.member = res.residual <= 1e-10 * std::max(1.0, t.norm());
    return res;
  }
  Eigen::VectorXcd x = m.colPivHouseholderQr().solve(t);
  res.residual = (m * x - t).norm();
  const double scale = std::max(1e-30, t.norm());
  res.member = res.residual <= 1e-10 * scale;
  res.coeffs_c.assign(x.data(), x.data() + x.size());
  return res;
}

}  // namespace

SpanResult in_span(const LinOp& target, const std::vector<LinOp>& basis) {
  bool all_rational = target.field() == Field::rational;
  for (const LinOp& b : basis) all_rational = all_rational && b.is_rational();
  if (all_rational) return in_span_exact(target, basis);
  return in_span_float(target, basis);
}

std::vector<Cplx> EigenResult::eigenvector(int j) const {
  const int d = static_cast<int>(values.size());
  std::vector<Cplx> v(d);
  for (int r = 0; r < d; ++r) v[r] = vectors[static_cast<std::size_t>(r) * d + j];
  return v;
}

EigenResult eigen(const LinOp& a) {
  if (a.field() != Field::complex64)
    throw std::invalid_argument("eigen-decomposition requires the complex field; "
                                "convert rational operators with to_complex()");
  const EMat m = to_eigen(a);
  Eigen::ComplexEigenSolver<EMat> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigen-decomposition did not converge");
  const int d = a.dim();
  EigenResult res;
  res.values.resize(d);
  res.vectors.resize(static_cast<std::size_t>(d) * d);
  const EMat& v = solver.eigenvectors();
  for (int j = 0; j < d; ++j) res.values[j] = solver.eigenvalues()(j);
  for (int r = 0; r < d; ++r)
    for (int j = 0; j < d; ++j)
      res.vectors[static_cast<std::size_t>(r) * d + j] = v(r, j);
  const double a_norm = m.norm();
  double max_res = 0.0;
  for (int j = 0; j < d; ++j) {
    const double rj = (m * v.col(j) - solver.eigenvalues()(j) * v.col(j)).norm() /
                      std::max(1.0, v.col(j).norm());
    max_res = std::max(max_res, rj);
  }
  res.max_residual = max_res / std::max(1e-300, a_norm);
  if (res.max_residual > 1e-9)
    throw std::runtime_error("eigen-decomposition residual exceeds 1e-9 * |A|");
  Eigen::JacobiSVD<EMat> svd(v);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  res.cond_estimate = smin <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : smax / smin;
  res.well_conditioned = res.cond_estimate <= 1e8;
  return res;
}

std::vector<std::vector<int>> cluster(const std::vector<Cplx>& values, double tol) {
  const int n = static_cast<int>(values.size());
  double scale = 1.0;
  for (const Cplx& v : values) scale = std::max(scale, std::abs(v));
  const double thresh = tol * scale;
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= thresh) parent[find(i)] = find(j);
  std::map<int, std::vector<int>> groups;
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (groups.find(root) == groups.end()) order.push_back(root);
    groups[root].push_back(i);
  }
  std::vector<std::vector<int>> out;
  out.reserve(order.size());
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return groups[x].front() < groups[y].front(); });
  for (int root : order) out.push_back(groups[root]);
  return out;
}

std::vector<Rat> char_poly(const LinOp& a) {
  if (a.field() != Field::rational)
    throw std::invalid_argument("char_poly requires rational entries");
  const int d = a.dim();
  // Faddeev-LeVerrier: M_1 = A, c_{d-1} = -tr M_1,
  // M_{k+1} = A (M_k + c_{d-k} I), c_{d-k-1} = -tr(M_{k+1}) / (k+1).
  std::vector<Rat> c(d + 1, Rat(0));
  c[d] = 1;
  LinOp m = a;
  Rat tr(0);
  for (int i = 0; i < d; ++i) tr += m.rat_entry(i, i);
  c[d - 1] = -tr;
  for (int k = 1; k < d; ++k) {
    m = mul(a, add(m, LinOp::scalar(d, c[d - k])));
    tr = 0;
    for (int i = 0; i < d; ++i) tr += m.rat_entry(i, i);
    c[d - k - 1] = -tr / Rat(k + 1);
  }
  return c;
}

}  // namespace gaudin
