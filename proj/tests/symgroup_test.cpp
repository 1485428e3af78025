#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gaudin/gaudin_family.hpp"
#include "gaudin/limits.hpp"
#include "gaudin/symgroup.hpp"

using namespace gaudin;

namespace {

TensorSpace qudits(int N, int n) {
  std::vector<ModuleRep> f(n, standard_module(N));
  return TensorSpace(std::move(f));
}

// ---- test-side oracles -------------------------------------------------

// The flip on C^2 (x) C^2 written entry by entry: with site 1 the slow digit
// the basis is 00, 01, 10, 11, and the flip exchanges 01 <-> 10.
LinOp flip_by_hand() {
  return LinOp::from_triplets(4, {{0, 0, Rat(1)},
                                  {2, 1, Rat(1)},
                                  {1, 2, Rat(1)},
                                  {3, 3, Rat(1)}});
}

// Tableau count via the hook length formula: n! / prod of hook lengths,
// hook(r, c) = arm + leg + 1.
long hook_count(const std::vector<int>& shape) {
  int n = 0;
  for (int part : shape) n += part;
  long count = 1;
  for (int k = 2; k <= n; ++k) count *= k;
  for (std::size_t r = 0; r < shape.size(); ++r)
    for (int c = 0; c < shape[r]; ++c) {
      int leg = 0;
      for (std::size_t rr = r + 1; rr < shape.size(); ++rr)
        if (shape[rr] > c) ++leg;
      count /= shape[r] - c + leg;  // arm = shape[r] - 1 - c
    }
  return count;
}

bool all_distinct(std::vector<std::vector<long>> tuples) {
  std::sort(tuples.begin(), tuples.end());
  return std::adjacent_find(tuples.begin(), tuples.end()) == tuples.end();
}

// Bending sums M_k with the diagonal Casimir member dropped, so only the
// triangular split-casimir sums remain.
OperatorFamily bending_sums(const TensorSpace& space) {
  OperatorFamily fam = bending_quadratic_family(space);
  REQUIRE(fam.members.back().label == "C2[diag]");
  fam.members.pop_back();
  return fam;
}

// ------------------------------------------------------------------------

}  // namespace

TEST_CASE("slot swap on two qubits matches the hand-built flip") {
  const TensorSpace space = qudits(2, 2);
  const LinOp t = transposition(space, 0, 1);
  CHECK(t == flip_by_hand());
  // Same operator from matrix-unit pairs instead of basis permutation.
  CHECK(t == split_casimir(space, 0, 1));
}

TEST_CASE("transpositions square to the identity and braid correctly") {
  const TensorSpace space = qudits(3, 3);
  const LinOp t01 = transposition(space, 0, 1);
  const LinOp t12 = transposition(space, 1, 2);
  const LinOp t02 = transposition(space, 0, 2);
  CHECK(mul(t01, t01) == LinOp::identity(space.dim()));
  CHECK(mul(t12, t12) == LinOp::identity(space.dim()));
  // (01)(12)(01) = (02)
  CHECK(mul(t01, mul(t12, t01)) == t02);
  CHECK(t01 == split_casimir(space, 0, 1));
  CHECK(t02 == split_casimir(space, 0, 2));
}

TEST_CASE("composition tracks both the permutation and the matrix") {
  const TensorSpace space = qudits(2, 3);
  PermOp a = make_perm_op(space, {1, 0, 2});
  PermOp b = make_perm_op(space, {0, 2, 1});
  const PermOp ab = compose(a, b);
  CHECK(ab.op == mul(a.op, b.op));
  CHECK(ab.op == make_perm_op(space, ab.perm).op);

  // 3-cycle: slot s moves to slot s+1, so three applications are the identity.
  const PermOp cyc = make_perm_op(space, {1, 2, 0});
  CHECK(compose(cyc, compose(cyc, cyc)).op == LinOp::identity(space.dim()));
  CHECK(compose(cyc, cyc).perm == std::vector<int>{2, 0, 1});
}

TEST_CASE("permutation operators reject bad input") {
  const TensorSpace sym({symmetric_power(2, 2), symmetric_power(2, 2)});
  CHECK_THROWS_AS(transposition(sym, 0, 1), std::invalid_argument);

  const TensorSpace space = qudits(2, 3);
  CHECK_THROWS_AS(make_perm_op(space, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_perm_op(space, {0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_perm_op(space, {0, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(transposition(space, 1, 1), std::invalid_argument);
}

TEST_CASE("X2 on two qubits is the flip, with the expected char poly") {
  const TensorSpace space = qudits(2, 2);
  const OperatorFamily jm = jm_elements(space);
  REQUIRE(jm.size() == 1);
  CHECK(jm.members[0].label == "X2");
  CHECK(jm.members[0].op == flip_by_hand());
  // Eigenvalues 1 (triplet) and -1 (singlet): (x-1)^3 (x+1).
  const std::vector<Rat> cp = char_poly(jm.members[0].op);
  const std::vector<Rat> want = {Rat(-1), Rat(2), Rat(0), Rat(-2), Rat(1)};
  CHECK(cp == want);
}

TEST_CASE("Jucys-Murphy sums commute exactly and match split casimirs") {
  const TensorSpace space = qudits(3, 3);
  const OperatorFamily jm = jm_elements(space);
  REQUIRE(jm.labels() == std::vector<std::string>{"X2", "X3"});
  CHECK(jm.by_label("X3").op ==
        add(split_casimir(space, 0, 2), split_casimir(space, 1, 2)));
  const CommuteReport rep = pairwise_commute(jm);
  CHECK(rep.all_commute);
  CHECK(rep.max_norm == 0.0);

  const TensorSpace four = qudits(2, 4);
  const CommuteReport rep4 = pairwise_commute(jm_elements(four));
  CHECK(rep4.all_commute);
  CHECK(rep4.max_norm == 0.0);
}

TEST_CASE("slot permutations centralize the diagonal action") {
  const TensorSpace space = qudits(3, 3);
  std::vector<LinOp> diag;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) diag.push_back(space.diagonal_gen(i, j));
  const CommuteReport rep = commute_against(jm_elements(space), diag);
  CHECK(rep.all_commute);
  CHECK(rep.max_norm == 0.0);
}

TEST_CASE("standard tableau contents of basic shapes") {
  // One row: the unique tableau 1 2 ... n, contents 1, 2, ..., n-1.
  const SYTContent row = syt_contents({4});
  REQUIRE(row.contents.size() == 1);
  CHECK(row.contents[0] == std::vector<long>{1, 2, 3});

  // One column: contents -1, -2, ..., -(n-1).
  const SYTContent col = syt_contents({1, 1, 1, 1});
  REQUIRE(col.contents.size() == 1);
  CHECK(col.contents[0] == std::vector<long>{-1, -2, -3});

  // Hook (2,1): tableaux 12/3 and 13/2.
  const SYTContent hook = syt_contents({2, 1});
  const std::vector<std::vector<long>> want = {{-1, 1}, {1, -1}};
  CHECK(hook.contents == want);

  CHECK_THROWS_AS(syt_contents({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(syt_contents({}), std::invalid_argument);
}

TEST_CASE("tableau counts match the hook length formula") {
  const std::vector<std::vector<int>> shapes = {
      {3},    {2, 1},    {1, 1, 1},                              // n = 3
      {4},    {3, 1},    {2, 2},    {2, 1, 1},    {1, 1, 1, 1},  // n = 4
      {5},    {4, 1},    {3, 2},    {3, 1, 1},    {2, 2, 1},
      {2, 1, 1, 1},      {1, 1, 1, 1, 1}};                       // n = 5
  for (const auto& shape : shapes) {
    const SYTContent c = syt_contents(shape);
    CHECK(static_cast<long>(c.contents.size()) == hook_count(shape));
    // Within one shape the content vector determines the tableau.
    CHECK(all_distinct(c.contents));
  }
}

TEST_CASE("expected joint spectra collect contents across partitions") {
  CHECK(expected_jm_tuples(2, 2) ==
        std::vector<std::vector<long>>{{-1}, {1}});
  // Row-count cap: with one row only the single-row tableau survives.
  CHECK(expected_jm_tuples(1, 3) == std::vector<std::vector<long>>{{1, 2}});
  // Two rows at n = 4: shapes (4), (3,1), (2,2) give 1 + 3 + 2 tableaux.
  CHECK(expected_jm_tuples(2, 4).size() == 6);

  const std::vector<std::vector<long>> full = expected_jm_tuples(4, 4);
  CHECK(full.size() == 10);
  CHECK(all_distinct(full));
  CHECK(std::is_sorted(full.begin(), full.end()));
}

TEST_CASE("JM spectrum on the singular space of two qubits") {
  const JMSpectrumReport rep = jm_spectrum_check(qudits(2, 2));
  CHECK(rep.pass);
  CHECK(rep.subspace_dim == 2);
  CHECK(rep.all_multiplicity_one);
  const std::vector<std::vector<long>> want = {{-1}, {1}};
  CHECK(rep.observed == want);
  CHECK(rep.expected == want);
}

TEST_CASE("JM spectrum at three and four slots matches tableau contents") {
  const JMSpectrumReport three = jm_spectrum_check(qudits(3, 3));
  CHECK(three.pass);
  CHECK(three.subspace_dim == 4);
  CHECK(three.observed.size() == 4);

  const JMSpectrumReport four = jm_spectrum_check(qudits(4, 4));
  CHECK(four.pass);
  CHECK(four.subspace_dim == 10);
  CHECK(four.all_multiplicity_one);
  CHECK(four.observed == four.expected);
  CHECK(all_distinct(four.observed));

  // Too few rows available: the column shape needs n rows.
  CHECK_THROWS_AS(jm_spectrum_check(qudits(2, 3)), std::invalid_argument);
}

TEST_CASE("triangular families agree in total sum but not span by span") {
  const TensorSpace space = qudits(2, 3);
  const OperatorFamily jm = jm_elements(space);
  const OperatorFamily ms = bending_sums(space);
  REQUIRE(jm.size() == ms.size());

  LinOp xs = LinOp::zeros(space.dim());
  for (const auto& m : jm.members) xs = add(xs, m.op);
  LinOp sums = LinOp::zeros(space.dim());
  for (const auto& m : ms.members) sums = add(sums, m.op);
  CHECK(xs == sums);

  // The individual spans genuinely differ: over three slots the transposition
  // operators are linearly independent, so span{t01, t02+t12} meets
  // span{t01+t02, t12} only in the total sum line. One call per direction
  // because the comparison stops at the first failed inclusion.
  CHECK_FALSE(family_spans_equal(jm, ms).forward);
  CHECK_FALSE(family_spans_equal(ms, jm).forward);
}

TEST_CASE("slot reversal conjugates one triangular family into the other") {
  for (int n : {3, 4}) {
    const TensorSpace space = qudits(2, n);
    std::vector<int> rev(n);
    for (int s = 0; s < n; ++s) rev[s] = n - 1 - s;
    const PermOp r = make_perm_op(space, rev);
    CHECK(mul(r.op, r.op) == LinOp::identity(space.dim()));

    const OperatorFamily jm = jm_elements(space);
    const OperatorFamily ms = bending_sums(space);
    for (int k = 1; k < n; ++k) {
      const LinOp& m = ms.by_label("M" + std::to_string(k)).op;
      const LinOp& x = jm.by_label("X" + std::to_string(n + 1 - k)).op;
      CHECK(mul(r.op, mul(m, r.op)) == x);
    }
  }

  // Larger total-sum identity at four slots as well.
  const TensorSpace four = qudits(2, 4);
  LinOp xs = LinOp::zeros(four.dim());
  for (const auto& m : jm_elements(four).members) xs = add(xs, m.op);
  LinOp sums = LinOp::zeros(four.dim());
  for (const auto& m : bending_sums(four).members) sums = add(sums, m.op);
  CHECK(xs == sums);
}
