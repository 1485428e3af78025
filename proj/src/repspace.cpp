#include "gaudin/repspace.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "exact_solve.hpp"

namespace gaudin {

const LinOp& ModuleRep::gen(int i, int j) const {
  if (i < 0 || i >= n_gl || j < 0 || j >= n_gl)
    throw std::out_of_range("generator index out of range");
  return generators[static_cast<std::size_t>(i) * n_gl + j];
}

ModuleRep standard_module(int N) {
  if (N <= 0) throw std::invalid_argument("N must be positive");
  ModuleRep rep;
  rep.n_gl = N;
  rep.dim = N;
  rep.label = "C^" + std::to_string(N);
  rep.generators.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      rep.generators.push_back(LinOp::from_triplets(N, {{i, j, Rat(1)}}));
  return rep;
}

namespace {

// Degree-m exponent vectors over N variables, descending lexicographic, so
// (m, 0, ..., 0) comes first.
void enumerate_monomials(int N, int m, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == N - 1) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = m; e >= 0; --e) {
    cur.push_back(e);
    enumerate_monomials(N, m - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ModuleRep symmetric_power(int N, int m) {
  if (N <= 0) throw std::invalid_argument("N must be positive");
  if (m < 0) throw std::invalid_argument("symmetric power degree must be >= 0");
  std::vector<std::vector<int>> basis;
  std::vector<int> cur;
  enumerate_monomials(N, m, cur, basis);
  std::map<std::vector<int>, int> index;
  for (std::size_t b = 0; b < basis.size(); ++b)
    index[basis[b]] = static_cast<int>(b);
  const int dim = static_cast<int>(basis.size());

  ModuleRep rep;
  rep.n_gl = N;
  rep.dim = dim;
  rep.label = "S^" + std::to_string(m) + "(C^" + std::to_string(N) + ")";
  rep.generators.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      std::vector<std::tuple<int, int, Rat>> entries;
      for (int b = 0; b < dim; ++b) {
        const std::vector<int>& alpha = basis[b];
        if (alpha[j] == 0) continue;
        // x_i d/dx_j maps x^alpha to alpha_j x^(alpha - e_j + e_i).
        std::vector<int> beta = alpha;
        beta[j] -= 1;
        beta[i] += 1;
        entries.emplace_back(index.at(beta), b, Rat(alpha[j]));
      }
      rep.generators.push_back(LinOp::from_triplets(dim, entries));
    }
  return rep;
}

ModuleRep diag_composite(const std::vector<ModuleRep>& factors) {
  if (factors.empty()) throw std::invalid_argument("no factors given");
  TensorSpace space(factors);
  ModuleRep rep;
  rep.n_gl = space.n_gl();
  rep.dim = space.dim();
  rep.label = "diag(";
  for (std::size_t s = 0; s < factors.size(); ++s)
    rep.label += (s ? "," : "") + factors[s].label;
  rep.label += ")";
  for (int i = 0; i < rep.n_gl; ++i)
    for (int j = 0; j < rep.n_gl; ++j)
      rep.generators.push_back(space.diagonal_gen(i, j));
  return rep;
}

bool check_gl_relations(const ModuleRep& rep, bool exhaustive) {
  const int N = rep.n_gl;
  std::vector<std::array<int, 4>> tuples;
  if (exhaustive || N <= 3) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) tuples.push_back({i, j, k, l});
  } else {
    std::mt19937_64 rng(20240901u);
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int t = 0; t < 40; ++t)
      tuples.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
  }
  for (const auto& [i, j, k, l] : tuples) {
    LinOp lhs = commutator(rep.gen(i, j), rep.gen(k, l));
    LinOp rhs = LinOp::zeros(rep.dim);
    if (j == k) rhs = add(rhs, rep.gen(i, l));
    if (l == i) rhs = sub(rhs, rep.gen(k, j));
    if (lhs != rhs) return false;
  }
  return true;
}

TensorSpace::TensorSpace(std::vector<ModuleRep> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("tensor space needs factors");
  n_gl_ = factors_.front().n_gl;
  for (const ModuleRep& f : factors_) {
    if (f.n_gl != n_gl_)
      throw std::invalid_argument("factors belong to different gl_N");
    if (f.dim <= 0) throw std::invalid_argument("factor with empty basis");
  }
  strides_.assign(factors_.size(), 1);
  for (int s = static_cast<int>(factors_.size()) - 2; s >= 0; --s)
    strides_[s] = strides_[s + 1] * factors_[s + 1].dim;
  long d = 1;
  for (const ModuleRep& f : factors_) d *= f.dim;
  if (d > std::numeric_limits<int>::max())
    throw std::invalid_argument("tensor space dimension too large");
  dim_ = static_cast<int>(d);
}

long TensorSpace::index_of(const std::vector<int>& digits) const {
  if (digits.size() != factors_.size())
    throw std::invalid_argument("digit count does not match sites");
  long idx = 0;
  for (std::size_t s = 0; s < digits.size(); ++s) {
    if (digits[s] < 0 || digits[s] >= factors_[s].dim)
      throw std::out_of_range("digit out of range");
    idx += digits[s] * strides_[s];
  }
  return idx;
}

std::vector<int> TensorSpace::digits_of(long index) const {
  if (index < 0 || index >= dim_) throw std::out_of_range("index out of range");
  std::vector<int> digits(factors_.size());
  for (std::size_t s = 0; s < factors_.size(); ++s) {
    digits[s] = static_cast<int>(index / strides_[s]);
    index %= strides_[s];
  }
  return digits;
}

LinOp TensorSpace::embed_op_at_site(int site, const LinOp& op) const {
  if (site < 0 || site >= sites()) throw std::out_of_range("site out of range");
  if (op.dim() != factors_[site].dim)
    throw std::invalid_argument("operator does not match the site factor");
  const long stride = strides_[site];
  const long outer = dim_ / (stride * factors_[site].dim);  // slow digits
  std::vector<RatRow> rows(dim_);
  for (int r = 0; r < op.dim(); ++r) {
    const RatRow& src = op.rat_row(r);
    if (src.empty()) continue;
    for (long o = 0; o < outer; ++o) {
      const long base = o * stride * factors_[site].dim;
      for (long inner = 0; inner < stride; ++inner) {
        RatRow& out = rows[base + r * stride + inner];
        for (const auto& [c, v] : src) out.emplace_back(base + c * stride + inner, v);
      }
    }
  }
  for (RatRow& row : rows)
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  return LinOp::from_rows(dim_, std::move(rows));
}

LinOp TensorSpace::embed_at_site(int site, int i, int j) const {
  return embed_op_at_site(site, factors_.at(site).gen(i, j));
}

LinOp TensorSpace::diagonal_gen(int i, int j) const {
  LinOp sum = LinOp::zeros(dim_);
  for (int s = 0; s < sites(); ++s) sum = add(sum, embed_at_site(s, i, j));
  return sum;
}

std::vector<std::vector<long>> TensorSpace::basis_weights() const {
  // Per-factor weights from the diagonal generators, which must be diagonal
  // matrices for the weight grading to be well defined.
  std::vector<std::vector<std::vector<long>>> site_weights(sites());
  for (int s = 0; s < sites(); ++s) {
    const ModuleRep& f = factors_[s];
    site_weights[s].assign(f.dim, std::vector<long>(n_gl_, 0));
    for (int a = 0; a < n_gl_; ++a) {
      const LinOp& h = f.gen(a, a);
      for (int r = 0; r < f.dim; ++r)
        for (const auto& [c, v] : h.rat_row(r)) {
          if (c != r)
            throw std::invalid_argument(
                "factor " + f.label + " has a non-diagonal Cartan generator");
          if (v.get_den() != 1)
            throw std::invalid_argument("non-integer weight in factor " + f.label);
          site_weights[s][r][a] = v.get_num().get_si();
        }
    }
  }
  std::vector<std::vector<long>> weights(dim_, std::vector<long>(n_gl_, 0));
  for (long idx = 0; idx < dim_; ++idx) {
    const std::vector<int> digits = digits_of(idx);
    for (int s = 0; s < sites(); ++s)
      for (int a = 0; a < n_gl_; ++a)
        weights[idx][a] += site_weights[s][digits[s]][a];
  }
  return weights;
}

std::vector<std::vector<Rat>> TensorSpace::singular_subspace() const {
  const auto weights = basis_weights();
  // Group basis indices by weight; map order fixes a deterministic block order.
  std::map<std::vector<long>, std::vector<long>> blocks;
  for (long idx = 0; idx < dim_; ++idx) blocks[weights[idx]].push_back(idx);

  std::vector<std::vector<Rat>> result;
  for (const auto& [w, idxs] : blocks) {
    // Stack the restrictions of every raising operator E_{a,a+1} leaving this
    // weight block; then the block's singular vectors are the kernel.
    std::vector<std::vector<Int>> rows;
    for (int a = 0; a + 1 < n_gl_; ++a) {
      std::vector<long> target_w = w;
      target_w[a] += 1;
      target_w[a + 1] -= 1;
      auto it = blocks.find(target_w);
      if (it == blocks.end()) continue;  // raising maps the block to zero
      const std::vector<long>& tidx = it->second;
      std::map<long, long> tpos;
      for (std::size_t p = 0; p < tidx.size(); ++p) tpos[tidx[p]] = p;
      std::vector<std::vector<Rat>> blk(
          tidx.size(), std::vector<Rat>(idxs.size(), Rat(0)));
      for (std::size_t col = 0; col < idxs.size(); ++col) {
        const std::vector<int> digits = digits_of(idxs[col]);
        for (int s = 0; s < sites(); ++s) {
          const LinOp& g = factors_[s].gen(a, a + 1);
          // column digits[s] of g lists the site images
          for (int r = 0; r < factors_[s].dim; ++r) {
            const Rat v = g.rat_entry(r, digits[s]);
            if (sgn(v) == 0) continue;
            std::vector<int> td = digits;
            td[s] = r;
            blk[tpos.at(index_of(td))][col] += v;
          }
        }
      }
      for (auto& r : blk) {
        std::vector<Int> ir(idxs.size());
        bool nonzero = false;
        Int den(1);
        for (const Rat& x : r)
          mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
        for (std::size_t cidx = 0; cidx < r.size(); ++cidx) {
          Rat s = r[cidx] * den;
          ir[cidx] = s.get_num();
          nonzero = nonzero || sgn(ir[cidx]) != 0;
        }
        if (nonzero) rows.push_back(std::move(ir));
      }
    }
    std::vector<std::vector<Int>> kernel;
    if (rows.empty()) {
      // No raising operator leaves the block: the whole block is singular.
      kernel.assign(idxs.size(), std::vector<Int>(idxs.size(), Int(0)));
      for (std::size_t p = 0; p < idxs.size(); ++p) kernel[p][p] = 1;
    } else {
      const int n_rows = static_cast<int>(rows.size());
      kernel = detail::integer_kernel(std::move(rows), n_rows,
                                      static_cast<int>(idxs.size()));
    }
    for (const auto& kv : kernel) {
      std::vector<Rat> full(dim_, Rat(0));
      for (std::size_t p = 0; p < idxs.size(); ++p)
        if (sgn(kv[p]) != 0) full[idxs[p]] = Rat(kv[p]);
      result.push_back(std::move(full));
    }
  }
  return result;
}

std::vector<LinOp> gelfand_invariants(const std::vector<LinOp>& gens, int N,
                                      int upto_l) {
  if (static_cast<int>(gens.size()) != N * N)
    throw std::invalid_argument("generator array must have N*N entries");
  if (N == 0 || gens.empty()) return {};
  const int dim = gens.front().dim();
  auto at = [&](int i, int j) -> const LinOp& {
    return gens[static_cast<std::size_t>(i) * N + j];
  };
  // power[k][(i,j)] = sum over paths of length k of E_{i t1} E_{t1 t2} ...;
  // the l-th invariant is the trace of power[l].
  std::vector<LinOp> current(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) current[static_cast<std::size_t>(i) * N + j] = at(i, j);
  std::vector<LinOp> out;
  for (int l = 1; l <= upto_l; ++l) {
    LinOp trace = LinOp::zeros(dim);
    for (int i = 0; i < N; ++i)
      trace = add(trace, current[static_cast<std::size_t>(i) * N + i]);
    out.push_back(trace);
    if (l == upto_l) break;
    std::vector<LinOp> next(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        LinOp s = LinOp::zeros(dim);
        for (int t = 0; t < N; ++t)
          s = add(s, mul(current[static_cast<std::size_t>(i) * N + t], at(t, j)));
        next[static_cast<std::size_t>(i) * N + j] = std::move(s);
      }
    current = std::move(next);
  }
  return out;
}

}  // namespace gaudin
