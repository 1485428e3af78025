#include "gaudin/duality.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "gaudin/limits.hpp"
#include "gaudin/rational.hpp"
#include "gaudin/speclab.hpp"

namespace gaudin {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Degree-m exponent vectors over nvars variables, descending lexicographic,
// so (m, 0, ..., 0) comes first. Same order as the symmetric-power basis.
void enumerate_monomials(int nvars, int m, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == nvars - 1) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = m; e >= 0; --e) {
    cur.push_back(e);
    enumerate_monomials(nvars, m - e, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int nvars, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_monomials(nvars, m, cur, out);
  return out;
}

// Sum over (from, to) pairs of the operator x_to d/dx_from on the monomial
// basis: x^e picks up the factor e_from and moves one unit from -> to.
LinOp ladder_sum(const PolySpace& p,
                 const std::vector<std::pair<int, int>>& moves) {
  std::vector<std::tuple<int, int, Rat>> entries;
  for (int idx = 0; idx < p.dim(); ++idx) {
    const std::vector<int>& e = p.exponents(idx);
    for (const auto& [from, to] : moves) {
      if (e[from] == 0) continue;
      if (from == to) {
        entries.emplace_back(idx, idx, Rat(e[from]));
        continue;
      }
      std::vector<int> target = e;
      --target[from];
      ++target[to];
      entries.emplace_back(static_cast<int>(p.index_of(target)), idx,
                           Rat(e[from]));
    }
  }
  return LinOp::from_triplets(p.dim(), entries);
}

}  // namespace

PolySpace::PolySpace(int N, int M, int d) : n_(N), m_(M), d_(d) {
  require(N >= 1 && M >= 1, "need at least one row and one column");
  require(d >= 0, "degree must be >= 0");
  exps_ = monomials(N * M, d);
}

long PolySpace::index_of(const std::vector<int>& exp) const {
  const auto it = std::lower_bound(exps_.begin(), exps_.end(), exp,
                                   std::greater<std::vector<int>>());
  if (it == exps_.end() || *it != exp)
    throw std::invalid_argument("not a basis exponent vector");
  return it - exps_.begin();
}

LinOp PolySpace::row_gen(int i, int j) const {
  std::vector<std::pair<int, int>> moves;
  for (int a = 0; a < m_; ++a) moves.emplace_back(j * m_ + a, i * m_ + a);
  return ladder_sum(*this, moves);
}

LinOp PolySpace::col_gen(int a, int b) const {
  std::vector<std::pair<int, int>> moves;
  for (int i = 0; i < n_; ++i) moves.emplace_back(i * m_ + b, i * m_ + a);
  return ladder_sum(*this, moves);
}

LinOp PolySpace::site_gen(int a, int i, int j) const {
  return ladder_sum(*this, {{j * m_ + a, i * m_ + a}});
}

MultidegreeComponent multidegree_component(const PolySpace& p,
                                           const std::vector<int>& degrees) {
  const int N = p.rows(), M = p.cols();
  require(static_cast<int>(degrees.size()) == M,
          "one degree per column expected");
  int total = 0;
  for (int m : degrees) {
    require(m >= 0, "column degrees must be >= 0");
    total += m;
  }
  require(total == p.degree(), "column degrees must sum to the total degree");

  std::vector<ModuleRep> factors;
  std::vector<std::vector<std::vector<int>>> monos;
  for (int a = 0; a < M; ++a) {
    factors.push_back(symmetric_power(N, degrees[a]));
    monos.push_back(monomials(N, degrees[a]));
  }
  TensorSpace ts(std::move(factors));
  std::vector<long> poly_index(ts.dim());
  for (long t = 0; t < ts.dim(); ++t) {
    const std::vector<int> digits = ts.digits_of(t);
    std::vector<int> exp(N * M, 0);
    for (int a = 0; a < M; ++a)
      for (int i = 0; i < N; ++i) exp[i * M + a] = monos[a][digits[a]][i];
    poly_index[t] = p.index_of(exp);
  }
  return {degrees, std::move(ts), std::move(poly_index)};
}

std::vector<std::vector<int>> all_multidegrees(int d, int M) {
  require(M >= 1, "need at least one column");
  require(d >= 0, "degree must be >= 0");
  return monomials(M, d);
}

LinOp to_component(const MultidegreeComponent& c, const LinOp& op) {
  require(op.is_rational(), "block restriction needs rational entries");
  std::vector<long> inv(op.dim(), -1);
  for (std::size_t t = 0; t < c.poly_index.size(); ++t)
    inv[c.poly_index[t]] = static_cast<long>(t);
  std::vector<std::tuple<int, int, Rat>> entries;
  for (int r = 0; r < op.dim(); ++r)
    for (const auto& [col, v] : op.rat_row(r)) {
      const bool in_r = inv[r] >= 0, in_c = inv[col] >= 0;
      if (in_r != in_c)
        throw std::invalid_argument("operator entry straddles the block");
      if (in_r)
        entries.emplace_back(static_cast<int>(inv[r]),
                             static_cast<int>(inv[col]), v);
    }
  return LinOp::from_triplets(c.space.dim(), entries);
}

LinOp from_component(int poly_dim, const MultidegreeComponent& c,
                     const LinOp& op) {
  require(op.is_rational(), "block embedding needs rational entries");
  require(op.dim() == c.space.dim(), "operator does not fit the block");
  std::vector<std::tuple<int, int, Rat>> entries;
  for (int r = 0; r < op.dim(); ++r)
    for (const auto& [col, v] : op.rat_row(r))
      entries.emplace_back(static_cast<int>(c.poly_index[r]),
                           static_cast<int>(c.poly_index[col]), v);
  return LinOp::from_triplets(poly_dim, entries);
}

OperatorFamily transported_quadratic(const PolySpace& p, const SitePoints& z) {
  const int M = p.cols();
  require(z.count() == M, "one marked point per column expected");
  std::vector<LinOp> hs(M, LinOp::zeros(p.dim()));
  for (const auto& degrees : all_multidegrees(p.degree(), M)) {
    const MultidegreeComponent comp = multidegree_component(p, degrees);
    const OperatorFamily fam = quadratic_family(comp.space, z);
    for (int a = 0; a < M; ++a)
      hs[a] = add(hs[a], from_component(p.dim(), comp, fam.members[a].op));
  }
  OperatorFamily out;
  out.name = "transported quadratic hamiltonians";
  for (int a = 0; a < M; ++a)
    out.members.push_back({"H" + std::to_string(a + 1), std::move(hs[a]),
                           "assembled blockwise over column-degree blocks"});
  return out;
}

OperatorFamily transported_bending(const PolySpace& p) {
  const int M = p.cols();
  OperatorFamily out;
  out.name = "transported bending sums";
  if (M == 1) return out;
  std::vector<LinOp> ms(M - 1, LinOp::zeros(p.dim()));
  for (const auto& degrees : all_multidegrees(p.degree(), M)) {
    const MultidegreeComponent comp = multidegree_component(p, degrees);
    const OperatorFamily fam = bending_quadratic_family(comp.space);
    for (int k = 0; k + 1 < M; ++k) {
      require(fam.members[k].label == "M" + std::to_string(k + 1),
              "unexpected bending member order");
      ms[k] = add(ms[k], from_component(p.dim(), comp, fam.members[k].op));
    }
  }
  for (int k = 0; k + 1 < M; ++k)
    out.members.push_back({"M" + std::to_string(k + 1), std::move(ms[k]),
                           "assembled blockwise over column-degree blocks"});
  return out;
}

OperatorFamily qz_elements(const PolySpace& p, const SitePoints& z) {
  const int M = p.cols();
  require(z.count() == M, "one marked point per column expected");
  OperatorFamily fam;
  fam.name = "quadratic column elements";
  for (int c = 0; c < M; ++c) {
    LinOp q = LinOp::zeros(p.dim());
    for (int a = 0; a < M; ++a)
      for (int b = a + 1; b < M; ++b) {
        const int weight = (c == a ? 1 : 0) - (c == b ? 1 : 0);
        if (weight == 0) continue;
        const Rat coef = Rat(weight) / (z.z[a] - z.z[b]);
        q = add(q, scale(coef, mul(p.col_gen(a, b), p.col_gen(b, a))));
      }
    fam.members.push_back(
        {"Q[e" + std::to_string(c + 1) + "]", std::move(q),
         "root-pair sum weighted by the diagonal unit e" +
             std::to_string(c + 1)});
  }
  return fam;
}

OperatorFamily gt_casimirs(const PolySpace& p, int upto_k) {
  const int M = p.cols();
  require(upto_k >= 1 && upto_k <= M, "corner size must lie in 1..M");
  OperatorFamily fam;
  fam.name = "corner Casimirs";
  for (int k = 1; k <= upto_k; ++k) {
    std::vector<LinOp> gens;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) gens.push_back(p.col_gen(a, b));
    std::vector<LinOp> cas = gelfand_invariants(gens, k, k);
    for (int l = 1; l <= k; ++l)
      fam.members.push_back(
          {"C" + std::to_string(l) + "[1.." + std::to_string(k) + "]",
           std::move(cas[l - 1]),
           "Gelfand invariant of the " + std::to_string(k) + "x" +
               std::to_string(k) + " corner, degree " + std::to_string(l)});
  }
  return fam;
}

namespace {

// in_span expansion of one member over span_fam + column degrees + identity;
// appends the exact coefficient line (or the failure) to notes.
bool expand_member(const PolySpace& p, const FamilyMember& target,
                   const OperatorFamily& span_fam,
                   std::vector<std::string>& notes) {
  std::vector<LinOp> basis = span_fam.ops();
  std::vector<std::string> labels = span_fam.labels();
  for (int a = 0; a < p.cols(); ++a) {
    basis.push_back(p.col_gen(a, a));
    labels.push_back("deg" + std::to_string(a + 1));
  }
  basis.push_back(LinOp::identity(p.dim()));
  labels.push_back("Id");

  const SpanResult r = in_span(target.op, basis);
  if (!r.member) {
    notes.push_back(target.label + ": not in the span");
    return false;
  }
  std::string line = target.label + " =";
  bool empty = true;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    if (r.coeffs[i] == Rat(0)) continue;
    line += std::string(empty ? " " : " + ") + "(" + rat_str(r.coeffs[i]) +
            ")*" + labels[i];
    empty = false;
  }
  if (empty) line += " 0";
  notes.push_back(line);
  return true;
}

std::vector<Cplx> tuple_projector(int dim, const JointTuple& t) {
  std::vector<Cplx> proj(static_cast<std::size_t>(dim) * dim, Cplx(0, 0));
  for (const auto& v : t.basis)
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        proj[static_cast<std::size_t>(r) * dim + c] += v[r] * std::conj(v[c]);
  return proj;
}

double projector_dist(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += std::norm(a[i] - b[i]);
  return std::sqrt(sq);
}

}  // namespace

DualityReport duality_check(const PolySpace& p, const SitePoints& z) {
  const OperatorFamily ham = transported_quadratic(p, z);
  const OperatorFamily qz = qz_elements(p, z);
  DualityReport rep;
  rep.forward = true;
  rep.backward = true;
  for (const FamilyMember& m : ham.members)
    rep.forward = expand_member(p, m, qz, rep.notes) && rep.forward;
  for (const FamilyMember& m : qz.members)
    rep.backward = expand_member(p, m, ham, rep.notes) && rep.backward;
  return rep;
}

GtMatchReport gt_match_check(const PolySpace& p) {
  const int N = p.rows(), M = p.cols();
  OperatorFamily side_a = transported_bending(p);
  side_a.name = "bending side";
  for (int s = 0; s < M; ++s) {
    std::vector<LinOp> gens;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) gens.push_back(p.site_gen(s, i, j));
    std::vector<LinOp> cas = gelfand_invariants(gens, N, 2);
    for (int l = 1; l <= 2; ++l)
      side_a.members.push_back(
          {"C" + std::to_string(l) + "[s" + std::to_string(s + 1) + "]",
           std::move(cas[l - 1]),
           "sitewise Gelfand invariant, degree " + std::to_string(l)});
  }
  const OperatorFamily side_b = gt_casimirs(p, M);

  GtMatchReport rep;
  const SpectrumReport ra = joint_spectrum(side_a);
  const SpectrumReport rb = joint_spectrum(side_b);
  rep.blocks_a = static_cast<int>(ra.tuples.size());
  rep.blocks_b = static_cast<int>(rb.tuples.size());
  if (ra.indeterminate || rb.indeterminate) {
    rep.indeterminate = true;
    rep.notes.push_back("joint spectrum indeterminate; no lattice verdict");
    return rep;
  }
  if (rep.blocks_a != rep.blocks_b) {
    rep.notes.push_back("block counts differ: " +
                        std::to_string(rep.blocks_a) + " vs " +
                        std::to_string(rep.blocks_b));
    return rep;
  }

  std::vector<std::vector<Cplx>> pb;
  for (const auto& t : rb.tuples) pb.push_back(tuple_projector(p.dim(), t));
  std::vector<bool> used(pb.size(), false);
  rep.match = true;
  for (std::size_t i = 0; i < ra.tuples.size(); ++i) {
    const std::vector<Cplx> pa = tuple_projector(p.dim(), ra.tuples[i]);
    double best = -1.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (used[j]) continue;
      const double d = projector_dist(pa, pb[j]);
      if (best < 0 || d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best < 0 || best > 1e-8) {
      rep.notes.push_back("block " + std::to_string(i) +
                          " of the bending side has no partner (closest " +
                          std::to_string(best) + ")");
      rep.match = false;
      return rep;
    }
    used[best_j] = true;
    rep.max_projector_dist = std::max(rep.max_projector_dist, best);
  }
  return rep;
}

}  // namespace gaudin
