#include "gaudin/gaudin_family.hpp"

#include <algorithm>
#include <numeric>

namespace gaudin {

SitePoints::SitePoints(std::vector<Rat> points) : z(std::move(points)) {
  if (z.empty()) throw std::invalid_argument("no site points given");
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (z[i] == z[j])
        throw std::invalid_argument("site points must be pairwise distinct");
}

LinOp split_casimir(const TensorSpace& space, int i, int j) {
  if (i == j) throw std::invalid_argument("split Casimir needs two distinct sites");
  const int N = space.n_gl();
  LinOp sum = LinOp::zeros(space.dim());
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      sum = add(sum, mul(space.embed_at_site(i, p, q), space.embed_at_site(j, q, p)));
  return sum;
}

OperatorFamily quadratic_family(const TensorSpace& space, const SitePoints& z) {
  if (z.count() != space.sites())
    throw std::invalid_argument("one site point per tensor factor required");
  OperatorFamily fam;
  fam.name = "quadratic";
  const int n = space.sites();
  for (int i = 0; i < n; ++i) {
    LinOp h = LinOp::zeros(space.dim());
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      h = add(h, scale(1 / (z.z[i] - z.z[k]), split_casimir(space, i, k)));
    }
    FamilyMember m;
    m.label = "H" + std::to_string(i + 1);
    m.provenance = "pairwise split-Casimir sum at site " + std::to_string(i + 1);
    m.op = std::move(h);
    fam.members.push_back(std::move(m));
  }
  return fam;
}

std::vector<TruncLaurent> lax_series(const TensorSpace& space,
                                     const SitePoints& z, int pole, int lo,
                                     int hi) {
  if (z.count() != space.sites())
    throw std::invalid_argument("one site point per tensor factor required");
  if (pole < 0 || pole >= z.count()) throw std::out_of_range("pole index out of range");
  const int N = space.n_gl();
  const Rat& zp = z.z[pole];
  std::vector<TruncLaurent> lax;
  lax.reserve(static_cast<std::size_t>(N) * N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      TruncLaurent s(zp, lo, hi, space.dim());
      s.add_coeff(-1, space.embed_at_site(pole, p, q));
      for (int k = 0; k < z.count(); ++k) {
        if (k == pole) continue;
        // 1/(w - z_k) = sum_j (-1)^j (w - z_p)^j / (z_p - z_k)^{j+1}
        const Rat d = zp - z.z[k];
        const LinOp e = space.embed_at_site(k, p, q);
        Rat pow = 1 / d;
        for (int j = 0; j <= hi; ++j) {
          s.add_coeff(j, scale(pow, e));
          pow = -pow / d;
        }
      }
      lax.push_back(std::move(s));
    }
  return lax;
}

DiffOp column_det(const std::vector<TruncLaurent>& lax, int N) {
  if (static_cast<int>(lax.size()) != N * N)
    throw std::invalid_argument("lax array must have N*N entries");
  const TruncLaurent& sample = lax.front();
  for (const TruncLaurent& s : lax)
    if (!s.same_window(sample))
      throw std::invalid_argument("lax entries must share base point and window");

  const Rat base = sample.base();
  const int lo = sample.lo(), hi = sample.hi(), dim = sample.dim();
  auto entry = [&](int p, int q) {
    // M[p][q] = delta_pq * D - L_pq
    DiffOp m(base, lo, hi, dim);
    m.set_coeff(0, negate(lax[static_cast<std::size_t>(p) * N + q]));
    if (p == q)
      m.set_coeff(1, TruncLaurent::constant(LinOp::identity(dim), base, lo, hi));
    return m;
  };

  DiffOp det(base, lo, hi, dim);
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // permutation sign by inversion count
    int inversions = 0;
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b)
        if (perm[a] > perm[b]) ++inversions;
    DiffOp term = entry(perm[0], 0);
    for (int col = 1; col < N; ++col) term = mul(term, entry(perm[col], col));
    det = add(det, inversions % 2 ? negate(term) : term);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (!det.is_monic())
    throw std::logic_error("column determinant failed to be monic");
  return det;
}

namespace {

struct RawMember {
  int l, order;  // member = coefficient of D^{N-l} at exponent -order
  LinOp op;
};

std::vector<RawMember> pole_members(const TensorSpace& space, const SitePoints& z,
                                    int pole, int hi) {
  const int N = space.n_gl();
  const int n = z.count();
  const DiffOp det = column_det(lax_series(space, z, pole, -N, hi), N);
  std::vector<RawMember> out;
  for (int l = 1; l <= N; ++l) {
    const bool last_pole = pole == n - 1;
    const int order_lo = last_pole ? l : 1;
    for (int order = order_lo; order <= l; ++order) {
      RawMember m;
      m.l = l;
      m.order = order;
      if (N - l <= det.order())
        m.op = det.coeff(N - l).coeff(-order);
      else
        m.op = LinOp::zeros(space.dim());
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace

OperatorFamily extract_generators(const TensorSpace& space, const SitePoints& z,
                                  int trunc) {
  const int N = space.n_gl();
  const int n = z.count();
  if (trunc < 0) trunc = 2 * N;
  if (trunc < 2 * N)
    throw std::invalid_argument("truncation order must be at least 2N");
  if (n != space.sites())
    throw std::invalid_argument("one site point per tensor factor required");

  OperatorFamily fam;
  fam.name = "generators";
  for (int pole = 0; pole < n; ++pole) {
    auto members = pole_members(space, z, pole, trunc);
    // Validity re-run: the same coefficients computed with a wider window
    // must agree exactly, otherwise the window was too small.
    auto wider = pole_members(space, z, pole, trunc + 2);
    if (members.size() != wider.size())
      throw std::logic_error("window re-run produced a different member count");
    for (std::size_t k = 0; k < members.size(); ++k)
      if (members[k].op != wider[k].op)
        throw TruncationError(
            "truncation window too small: retained coefficient changed when "
            "recomputed at hi + 2; increase trunc beyond " +
                std::to_string(trunc),
            -N);
    for (auto& m : members) {
      FamilyMember fm;
      fm.label = "S" + std::to_string(m.l) + "[z" + std::to_string(pole + 1) +
                 ",m" + std::to_string(m.order) + "]";
      fm.provenance = "coefficient of D^" + std::to_string(N - m.l) +
                      " at (w - z_" + std::to_string(pole + 1) + ")^{-" +
                      std::to_string(m.order) + "}";
      fm.op = std::move(m.op);
      fam.members.push_back(std::move(fm));
    }
  }

  std::vector<LinOp> diag_gens;
  diag_gens.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) diag_gens.push_back(space.diagonal_gen(i, j));
  const auto casimirs = gelfand_invariants(diag_gens, N, N);
  for (int l = 1; l <= N; ++l) {
    FamilyMember fm;
    fm.label = "C" + std::to_string(l) + "[diag]";
    fm.provenance = "Gelfand invariant of the diagonal action, degree " +
                    std::to_string(l);
    fm.op = casimirs[l - 1];
    fam.members.push_back(std::move(fm));
  }
  return fam;
}

}  // namespace gaudin
