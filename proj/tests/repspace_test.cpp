#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "gaudin/repspace.hpp"

using namespace gaudin;

namespace {

// Test-side oracle: dense Kronecker embedding, built without TensorSpace.
std::vector<std::vector<Rat>> oracle_embed(const std::vector<int>& dims, int site,
                                           const std::vector<std::vector<Rat>>& m) {
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<std::vector<Rat>> out(total, std::vector<Rat>(total, Rat(0)));
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) {
      // decode mixed-radix digits, site 1 slowest
      int rr = r, cc = c;
      bool match = true;
      int mr = -1, mc = -1;
      for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
        const int dr = rr % dims[s], dc = cc % dims[s];
        rr /= dims[s];
        cc /= dims[s];
        if (s == site) {
          mr = dr;
          mc = dc;
        } else if (dr != dc) {
          match = false;
        }
      }
      if (match) out[r][c] = m[mr][mc];
    }
  return out;
}

std::vector<std::vector<Rat>> to_dense(const LinOp& a) {
  std::vector<std::vector<Rat>> m(a.dim(), std::vector<Rat>(a.dim(), Rat(0)));
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) m[r][c] = a.rat_entry(r, c);
  return m;
}

int oracle_rank(std::vector<std::vector<Rat>> m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
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
    for (int r = 0; r < rows; ++r) {
      if (r == rank || sgn(m[r][c]) == 0) continue;
      const Rat f = m[r][c] / m[rank][c];
      for (int j = 0; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("standard module satisfies the gl bracket relations") {
  for (int N : {1, 2, 3}) {
    const ModuleRep rep = standard_module(N);
    CHECK(rep.dim == N);
    CHECK(check_gl_relations(rep, true));
  }
}

TEST_CASE("symmetric square of C^2: dimension and Cartan action") {
  const ModuleRep rep = symmetric_power(2, 2);
  REQUIRE(rep.dim == 3);
  // Basis order x^2, xy, y^2: E_11 = diag(2, 1, 0).
  const LinOp& e11 = rep.gen(0, 0);
  CHECK(e11.rat_entry(0, 0) == Rat(2));
  CHECK(e11.rat_entry(1, 1) == Rat(1));
  CHECK(e11.rat_entry(2, 2) == Rat(0));
  CHECK(check_gl_relations(rep, true));
}

TEST_CASE("symmetric powers of C^3 satisfy the gl relations exhaustively") {
  for (int m : {1, 2, 3}) CHECK(check_gl_relations(symmetric_power(3, m), true));
}

TEST_CASE("tensor codec round-trips and matches the slow-site convention") {
  const TensorSpace space({standard_module(2), symmetric_power(2, 2),
                           standard_module(2)});
  REQUIRE(space.dim() == 12);
  for (long idx = 0; idx < space.dim(); ++idx)
    CHECK(space.index_of(space.digits_of(idx)) == idx);
  // site 1 slowest: digits (1, 2, 0) -> 1*6 + 2*2 + 0
  CHECK(space.index_of({1, 2, 0}) == 10);
}

TEST_CASE("site embedding agrees with a dense Kronecker oracle") {
  const TensorSpace space({standard_module(2), symmetric_power(2, 2)});
  for (int site : {0, 1})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const LinOp lib = space.embed_at_site(site, i, j);
        const auto oracle = oracle_embed(
            {2, 3}, site, to_dense(space.factor(site).gen(i, j)));
        CHECK(to_dense(lib) == oracle);
      }
}

TEST_CASE("embeddings at distinct sites commute") {
  const TensorSpace space({standard_module(2), symmetric_power(2, 2)});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const LinOp a = space.embed_at_site(0, i, j);
          const LinOp b = space.embed_at_site(1, k, l);
          CHECK(commutator(a, b).is_zero());
        }
}

TEST_CASE("diagonal Cartan action on two qubits is diag(2,1,1,0)") {
  const TensorSpace space({standard_module(2), standard_module(2)});
  const LinOp h = space.diagonal_gen(0, 0);
  // Oracle: dense Kronecker sum built independently.
  const auto e11 = to_dense(standard_module(2).gen(0, 0));
  auto dense = oracle_embed({2, 2}, 0, e11);
  const auto second = oracle_embed({2, 2}, 1, e11);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) dense[r][c] += second[r][c];
  CHECK(to_dense(h) == dense);
  CHECK(h.rat_entry(0, 0) == Rat(2));
  CHECK(h.rat_entry(1, 1) == Rat(1));
  CHECK(h.rat_entry(2, 2) == Rat(1));
  CHECK(h.rat_entry(3, 3) == Rat(0));
}

TEST_CASE("basis weights on two qubits") {
  const TensorSpace space({standard_module(2), standard_module(2)});
  const auto w = space.basis_weights();
  REQUIRE(w.size() == 4);
  CHECK(w[0] == std::vector<long>{2, 0});
  CHECK(w[1] == std::vector<long>{1, 1});
  CHECK(w[2] == std::vector<long>{1, 1});
  CHECK(w[3] == std::vector<long>{0, 2});
}

TEST_CASE("singular subspace of two qubits") {
  const TensorSpace space({standard_module(2), standard_module(2)});
  const auto sing = space.singular_subspace();
  REQUIRE(sing.size() == 2);
  // Every vector is annihilated by the diagonal raising operator, exactly.
  const LinOp raise = space.diagonal_gen(0, 1);
  for (const auto& v : sing)
    for (int r = 0; r < 4; ++r) {
      Rat s(0);
      for (int c = 0; c < 4; ++c) s += raise.rat_entry(r, c) * v[c];
      CHECK(sgn(s) == 0);
    }
  // The span contains e1e1 and the antisymmetric combination e1e2 - e2e1.
  // With weight blocks ordered ascending in the first weight entry, the
  // singlet (weight (1,1)) precedes the highest vector (weight (2,0)).
  bool found_top = false, found_singlet = false;
  for (const auto& v : sing) {
    if (v[0] == 1 && sgn(v[1]) == 0 && sgn(v[2]) == 0 && sgn(v[3]) == 0)
      found_top = true;
    if (sgn(v[0]) == 0 && v[1] == 1 && v[2] == -1 && sgn(v[3]) == 0)
      found_singlet = true;
  }
  CHECK(found_top);
  CHECK(found_singlet);
}

TEST_CASE("singular subspace of four qubits has dimension six") {
  const TensorSpace space({standard_module(2), standard_module(2),
                           standard_module(2), standard_module(2)});
  const auto sing = space.singular_subspace();
  // Frozen expectation: 6. Cross-checked against the rank of the raising
  // operator on the full space (kernel dim = 16 - rank).
  const LinOp raise = space.diagonal_gen(0, 1);
  const int rank = oracle_rank(to_dense(raise));
  CHECK(sing.size() == static_cast<std::size_t>(16 - rank));
  CHECK(sing.size() == 6);
}

TEST_CASE("singular vectors on a mixed-weight space are weight vectors") {
  const TensorSpace space({symmetric_power(2, 2), standard_module(2),
                           standard_module(2)});
  const auto sing = space.singular_subspace();
  const auto weights = space.basis_weights();
  const LinOp raise = space.diagonal_gen(0, 1);
  REQUIRE(!sing.empty());
  for (const auto& v : sing) {
    // exact annihilation
    for (int r = 0; r < space.dim(); ++r) {
      Rat s(0);
      for (int c = 0; c < space.dim(); ++c) s += raise.rat_entry(r, c) * v[c];
      CHECK(sgn(s) == 0);
    }
    // support confined to a single weight
    std::vector<long> w;
    bool single_weight = true;
    for (int c = 0; c < space.dim(); ++c)
      if (sgn(v[c]) != 0) {
        if (w.empty())
          w = weights[c];
        else
          single_weight = single_weight && (w == weights[c]);
      }
    CHECK(single_weight);
  }
}

TEST_CASE("glued composite acts like the diagonal action of its factors") {
  const std::vector<ModuleRep> factors = {standard_module(2), standard_module(2)};
  const ModuleRep glued = diag_composite(factors);
  REQUIRE(glued.dim == 4);
  CHECK(check_gl_relations(glued, true));
  const TensorSpace space(factors);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(glued.gen(i, j) == space.diagonal_gen(i, j));
}

TEST_CASE("gelfand invariants are central for the diagonal action") {
  const TensorSpace space({standard_module(2), standard_module(2)});
  std::vector<LinOp> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gens.push_back(space.diagonal_gen(i, j));
  const auto cas = gelfand_invariants(gens, 2, 2);
  REQUIRE(cas.size() == 2);
  // degree-1 invariant counts total boxes: 2 * identity here
  CHECK(cas[0] == LinOp::scalar(4, Rat(2)));
  for (const LinOp& c : cas)
    for (const LinOp& g : gens) CHECK(commutator(c, g).is_zero());
}
