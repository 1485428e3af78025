#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "gaudin/gaudin_family.hpp"
#include "gaudin/limits.hpp"
#include "gaudin/speclab.hpp"

using namespace gaudin;

namespace {

TensorSpace qudits(int N, int n) {
  std::vector<ModuleRep> f(n, standard_module(N));
  return TensorSpace(std::move(f));
}

OperatorFamily named(std::vector<std::pair<std::string, LinOp>> ops) {
  OperatorFamily fam;
  for (auto& [label, op] : ops) fam.members.push_back({label, std::move(op), ""});
  return fam;
}

// ---- test-side oracles -------------------------------------------------

// Jucys-Murphy sums written directly from transpositions (split casimirs on
// standard factors), independent of any dedicated construction.
OperatorFamily jm_by_hand(const TensorSpace& space) {
  OperatorFamily fam;
  for (int i = 1; i < space.sites(); ++i) {
    LinOp x = LinOp::zeros(space.dim());
    for (int j = 0; j < i; ++j) x = add(x, split_casimir(space, j, i));
    fam.members.push_back({"X" + std::to_string(i + 1), std::move(x), ""});
  }
  return fam;
}

// Hand-enumerated standard-tableau contents for n = 3 (c_k = column - row of
// the box holding k, k = 2, 3):
//   shape (3):     tableau 123          -> ( 1,  2)
//   shape (2,1):   tableaux 12/3, 13/2  -> ( 1, -1), (-1,  1)
//   shape (1,1,1): tableau 1/2/3        -> (-1, -2)
const std::vector<std::vector<long>> kContentsN3 = {
    {1, 2}, {1, -1}, {-1, 1}, {-1, -2}};

long round_checked(Cplx v) {
  const double rounded = std::round(v.real());
  REQUIRE(std::abs(v.real() - rounded) <= 1e-6);
  REQUIRE(std::abs(v.imag()) <= 1e-6);
  return static_cast<long>(rounded);
}

std::vector<std::vector<long>> rounded_tuples(const SpectrumReport& report) {
  std::vector<std::vector<long>> out;
  for (const auto& t : report.tuples) {
    std::vector<long> tuple;
    for (const Cplx& v : t.values) tuple.push_back(round_checked(v));
    out.push_back(std::move(tuple));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------------------

}  // namespace

TEST_CASE("restriction to the full space leaves a family unchanged") {
  const LinOp a = LinOp::from_triplets(
      3, {{0, 1, Rat(2)}, {1, 2, Rat(-1)}, {2, 0, Rat(5)}});
  std::vector<std::vector<Rat>> basis(3, std::vector<Rat>(3, Rat(0)));
  for (int i = 0; i < 3; ++i) basis[i][i] = Rat(1);
  const OperatorFamily out = restrict_family(named({{"a", a}}), basis);
  CHECK(out.members[0].op == a);
}

TEST_CASE("restricting a diagonal operator gives a principal submatrix") {
  const LinOp d = LinOp::from_triplets(
      3, {{0, 0, Rat(1)}, {1, 1, Rat(2)}, {2, 2, Rat(3)}});
  std::vector<std::vector<Rat>> basis = {{Rat(1), Rat(0), Rat(0)},
                                         {Rat(0), Rat(0), Rat(1)}};
  const OperatorFamily out = restrict_family(named({{"d", d}}), basis);
  CHECK(out.members[0].op ==
        LinOp::from_triplets(2, {{0, 0, Rat(1)}, {1, 1, Rat(3)}}));
}

TEST_CASE("restriction rejects a non-invariant subspace with diagnostics") {
  const TensorSpace space = qudits(2, 2);
  // The flip sends e0*e1 to e1*e0, which leaves the chosen line.
  std::vector<std::vector<Rat>> line(1, std::vector<Rat>(4, Rat(0)));
  line[0][1] = Rat(1);
  try {
    restrict_family(named({{"flip", split_casimir(space, 0, 1)}}), line);
    FAIL("expected an invariance error");
  } catch (const InvarianceError& e) {
    CHECK(e.member == "flip");
    CHECK(e.basis_index == 0);
    CHECK(e.residual > 0.1);
  }
}

TEST_CASE("quadratic family restricts to commuting matrices on the singular subspace") {
  const TensorSpace space = qudits(2, 3);
  const SitePoints z({Rat(0), Rat(1), Rat(3)});
  const OperatorFamily quad = quadratic_family(space, z);
  const auto sing = space.singular_subspace();
  REQUIRE(static_cast<int>(sing.size()) == 3);
  const OperatorFamily restricted = restrict_family(quad, sing);
  CHECK(restricted.members[0].op.dim() == 3);
  const CommuteReport rep = pairwise_commute(restricted);
  CHECK(rep.all_commute);
  CHECK(rep.max_norm == 0.0);
}

TEST_CASE("joint spectrum of explicit diagonal families") {
  const LinOp a =
      LinOp::from_triplets(2, {{0, 0, Rat(1)}, {1, 1, Rat(2)}});
  const LinOp b = LinOp::scalar(2, Rat(3));
  const SpectrumReport rep = joint_spectrum(named({{"a", a}, {"b", b}}));
  CHECK(rep.simple);
  CHECK_FALSE(rep.indeterminate);
  CHECK(rounded_tuples(rep) ==
        std::vector<std::vector<long>>{{1, 3}, {2, 3}});
  CHECK(rep.min_gap == doctest::Approx(1.0));

  const SpectrumReport zero =
      joint_spectrum(named({{"z", LinOp::zeros(2)}}));
  CHECK_FALSE(zero.simple);
  CHECK_FALSE(zero.indeterminate);
  REQUIRE(zero.tuples.size() == 1);
  CHECK(zero.tuples[0].multiplicity == 2);
}

TEST_CASE("joint spectrum refuses a non-commuting family") {
  const TensorSpace space = qudits(2, 3);
  CHECK_THROWS_AS(
      joint_spectrum(named({{"t12", split_casimir(space, 0, 1)},
                            {"t23", split_casimir(space, 1, 2)}})),
      std::invalid_argument);
}

TEST_CASE("restricted JM family has the standard-tableau content spectrum") {
  const TensorSpace space = qudits(3, 3);
  const OperatorFamily jm = jm_by_hand(space);
  const auto sing = space.singular_subspace();
  REQUIRE(static_cast<int>(sing.size()) == 4);  // hook counts 1 + 2 + 1
  const OperatorFamily restricted = restrict_family(jm, sing);
  const SpectrumReport rep = joint_spectrum(restricted);

  CHECK(rep.simple);
  CHECK_FALSE(rep.indeterminate);
  int total = 0;
  for (const auto& t : rep.tuples) total += t.multiplicity;
  CHECK(total == rep.dim);

  auto expected = kContentsN3;
  std::sort(expected.begin(), expected.end());
  CHECK(rounded_tuples(rep) == expected);
}

TEST_CASE("joint spectrum does not depend on the combination draw") {
  const TensorSpace space = qudits(3, 3);
  const OperatorFamily restricted =
      restrict_family(jm_by_hand(space), space.singular_subspace());
  const auto t1 = rounded_tuples(joint_spectrum(restricted, 1u));
  const auto t2 = rounded_tuples(joint_spectrum(restricted, 77u));
  const auto t3 = rounded_tuples(joint_spectrum(restricted, 20240911u));
  CHECK(t1 == t2);
  CHECK(t2 == t3);
}

TEST_CASE("reported eigenvalues are roots of the exact characteristic polynomials") {
  const TensorSpace space = qudits(3, 3);
  const OperatorFamily restricted =
      restrict_family(jm_by_hand(space), space.singular_subspace());
  const SpectrumReport rep = joint_spectrum(restricted);
  REQUIRE(restricted.members[0].op.dim() <= 12);

  for (std::size_t f = 0; f < restricted.members.size(); ++f) {
    const std::vector<Rat> poly = char_poly(restricted.members[f].op);
    for (const auto& tuple : rep.tuples) {
      // Double-precision Horner evaluation must nearly vanish...
      Cplx acc(0.0, 0.0);
      for (int c = static_cast<int>(poly.size()) - 1; c >= 0; --c)
        acc = acc * tuple.values[f] + rat_to_double(poly[c]);
      CHECK(std::abs(acc) <= 1e-6);
      // ...and the integer-rounded eigenvalue is an exact root.
      const Rat root(round_checked(tuple.values[f]));
      Rat exact(0);
      for (int c = static_cast<int>(poly.size()) - 1; c >= 0; --c)
        exact = exact * root + poly[c];
      CHECK(exact == Rat(0));
    }
  }
}

TEST_CASE("adding members refines the tuple multiset") {
  const TensorSpace space = qudits(3, 3);
  const OperatorFamily jm = jm_by_hand(space);
  OperatorFamily first;
  first.members.push_back(jm.members[0]);
  const auto sing = space.singular_subspace();
  const SpectrumReport small = joint_spectrum(restrict_family(first, sing));
  const SpectrumReport big = joint_spectrum(restrict_family(jm, sing));

  CHECK_FALSE(small.simple);  // X2 alone has eigenvalues +-1 twice each
  CHECK(big.simple);
  for (const auto& coarse : small.tuples) {
    int refined = 0;
    for (const auto& fine : big.tuples)
      if (std::abs(fine.values[0] - coarse.values[0]) <= 1e-8)
        refined += fine.multiplicity;
    CHECK(refined == coarse.multiplicity);
  }
}

TEST_CASE("bending and JM families agree on the simplicity verdict") {
  const TensorSpace space = qudits(3, 3);
  const auto sing = space.singular_subspace();
  const SpectrumReport jm =
      joint_spectrum(restrict_family(jm_by_hand(space), sing));
  const SpectrumReport bend = joint_spectrum(
      restrict_family(bending_quadratic_family(space), sing));
  CHECK(jm.simple);
  CHECK(bend.simple);
  CHECK_FALSE(jm.indeterminate);
  CHECK_FALSE(bend.indeterminate);
}

TEST_CASE("genericity sampling: one-dimensional gl keeps every draw simple") {
  const GenericityReport rep = genericity_sample(1, {2, 3}, 5, 31u);
  CHECK(rep.simple_count == 5);
  CHECK(rep.non_simple_count == 0);
  CHECK(rep.indeterminate_count == 0);
}

TEST_CASE("genericity sampling: three qubit sites stay simple across draws") {
  const GenericityReport rep = genericity_sample(2, {1, 1, 1}, 20, 20240912u);
  CHECK(rep.trials == 20);
  CHECK(rep.simple_count == 20);
  REQUIRE(static_cast<int>(rep.samples.size()) == 20);
  for (const auto& sample : rep.samples) {
    CHECK(sample.z.size() == 3);
    CHECK(sample.min_gap > 0.0);
    // Replay data: points are pairwise distinct bounded-height rationals.
    for (std::size_t i = 0; i < sample.z.size(); ++i)
      for (std::size_t j = i + 1; j < sample.z.size(); ++j)
        CHECK(sample.z[i] != sample.z[j]);
  }
}

TEST_CASE("genericity sampling: a symmetric-square site stays simple") {
  const GenericityReport rep = genericity_sample(2, {2, 1, 1}, 20, 20240913u);
  CHECK(rep.simple_count == 20);
  CHECK(rep.indeterminate_count == 0);
}
