#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gaudin/limits.hpp"

using namespace gaudin;

namespace {

TensorSpace qubits(int n) {
  std::vector<ModuleRep> f(n, standard_module(2));
  return TensorSpace(std::move(f));
}

// ---- test-side oracles, written before the checks that rely on them ----

// Dense rational matrix helpers, independent of the library internals.
using TMat = std::vector<Rat>;

TMat tmul(const TMat& a, const TMat& b, int N) {
  TMat r(static_cast<std::size_t>(N) * N, Rat(0));
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < N; ++l)
      for (int j = 0; j < N; ++j)
        r[i * N + j] += a[i * N + l] * b[l * N + j];
  return r;
}

Rat ttrace(const TMat& a, int N) {
  Rat t(0);
  for (int i = 0; i < N; ++i) t += a[i * N + i];
  return t;
}

TMat tadd(const TMat& a, const TMat& b) {
  TMat r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

ClassicalPoint random_point(int N, int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  ClassicalPoint pt;
  pt.n_gl = N;
  pt.X.assign(n, TMat(static_cast<std::size_t>(N) * N, Rat(0)));
  for (auto& x : pt.X)
    for (auto& e : x) e = rat_of(num(rng), den(rng));
  return pt;
}

using Functional = std::function<Rat(const ClassicalPoint&)>;

// Independent numerical Lie-Poisson bracket: exact central differences with
// Richardson extrapolation for the partials, assembled through the
// coordinate form  sum_j sum_{a,b,c} X_ab (df/dX_cb dg/dX_ac - f<->g),
// which never touches the library's matrix-gradient formula.
double fd_bracket(const Functional& f, const Functional& g,
                  const ClassicalPoint& pt) {
  const int N = pt.n_gl;
  const int n = pt.sites();
  const auto partials = [&](const Functional& fn) {
    std::vector<std::vector<double>> out(
        n, std::vector<double>(static_cast<std::size_t>(N) * N, 0.0));
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) {
          const auto diff = [&](const Rat& h) {
            ClassicalPoint plus = pt, minus = pt;
            plus.X[j][p * N + q] += h;
            minus.X[j][p * N + q] -= h;
            return rat_to_double((fn(plus) - fn(minus)) / (Rat(2) * h));
          };
          const double d1 = diff(rat_of(1, 10000));
          const double d2 = diff(rat_of(1, 20000));
          out[j][p * N + q] = (4.0 * d2 - d1) / 3.0;
        }
    return out;
  };
  const auto pf = partials(f);
  const auto pg = partials(g);
  double total = 0.0;
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          total += rat_to_double(pt.entry(j, a, b)) *
                   (pf[j][c * N + b] * pg[j][a * N + c] -
                    pg[j][c * N + b] * pf[j][a * N + c]);
  return total;
}

Functional bend_functional(int l, int k, int alpha) {
  return [=](const ClassicalPoint& pt) {
    return classical_bending(pt, l, k, alpha);
  };
}

// ------------------------------------------------------------------------

}  // namespace

TEST_CASE("degeneration schedules reject inadmissible data") {
  const TensorSpace space = qubits(3);
  DegenSchedule ok;
  ok.k = 1;
  ok.z_fixed = {Rat(0)};
  ok.z_center = Rat(1);
  ok.u = {Rat(0), Rat(1)};
  ok.s_values = {rat_of(1, 10), rat_of(1, 100)};
  CHECK_NOTHROW(ok.validate(3));

  DegenSchedule dup_u = ok;
  dup_u.u = {Rat(1), Rat(1)};
  CHECK_THROWS_AS(dup_u.validate(3), std::invalid_argument);

  DegenSchedule center_hit = ok;
  center_hit.z_fixed = {Rat(1)};
  CHECK_THROWS_AS(center_hit.validate(3), std::invalid_argument);

  DegenSchedule growing = ok;
  growing.s_values = {rat_of(1, 100), rat_of(1, 10)};
  CHECK_THROWS_AS(growing.validate(3), std::invalid_argument);

  // At s = 1/10 the swept point 1 + (1/10)*(-10) = 0 hits the fixed point.
  DegenSchedule collide = ok;
  collide.u = {Rat(0), Rat(-10)};
  CHECK_THROWS_AS(collide.validate(3), std::invalid_argument);
  CHECK_THROWS_AS(predicted_limit_family(space, collide), std::invalid_argument);
}

TEST_CASE("numerical bracket oracle reproduces the linear-function bracket") {
  // {Tr(A X_1), Tr(B X_1)} = Tr(X_1 [A, B]) is the defining property of the
  // Lie-Poisson structure; this pins the oracle before it is used as one.
  const int N = 2;
  std::mt19937 rng(20240905);
  const ClassicalPoint pt = random_point(N, 2, rng);
  const TMat A = {Rat(1), Rat(2), Rat(-1), Rat(3)};
  const TMat B = {Rat(0), Rat(1), Rat(4), Rat(-2)};
  const Functional f = [&](const ClassicalPoint& p) {
    TMat x = {p.entry(0, 0, 0), p.entry(0, 0, 1), p.entry(0, 1, 0),
              p.entry(0, 1, 1)};
    return ttrace(tmul(A, x, N), N);
  };
  const Functional g = [&](const ClassicalPoint& p) {
    TMat x = {p.entry(0, 0, 0), p.entry(0, 0, 1), p.entry(0, 1, 0),
              p.entry(0, 1, 1)};
    return ttrace(tmul(B, x, N), N);
  };
  TMat ab = tmul(A, B, N);
  const TMat ba = tmul(B, A, N);
  for (std::size_t i = 0; i < ab.size(); ++i) ab[i] -= ba[i];
  TMat x1 = {pt.entry(0, 0, 0), pt.entry(0, 0, 1), pt.entry(0, 1, 0),
             pt.entry(0, 1, 1)};
  const double expected = rat_to_double(ttrace(tmul(x1, ab, N), N));
  CHECK(std::abs(expected) > 0.5);  // the comparison is not vacuous
  CHECK(fd_bracket(f, g, pt) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("classical hamiltonian values match dense trace formulas") {
  std::mt19937 rng(20240906);
  const int N = 3, n = 3;
  const ClassicalPoint pt = random_point(N, n, rng);
  const TMat x1 = pt.X[0];
  const TMat y1 = tadd(pt.X[1], pt.X[2]);

  CHECK(classical_bending(pt, 3, 1, 0) ==
        ttrace(tmul(tmul(x1, x1, N), x1, N), N));
  CHECK(classical_bending(pt, 3, 1, 3) ==
        ttrace(tmul(tmul(y1, y1, N), y1, N), N));
  CHECK(classical_bending(pt, 2, 1, 1) == Rat(2) * ttrace(tmul(x1, y1, N), N));
  // Last site: the glued tail is empty, so only alpha = 0 survives.
  CHECK(classical_bending(pt, 2, 3, 0) ==
        ttrace(tmul(pt.X[2], pt.X[2], N), N));
  CHECK(classical_bending(pt, 2, 3, 1) == Rat(0));
  CHECK_THROWS_AS(classical_bending(pt, 2, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(classical_bending(pt, 2, 1, 3), std::invalid_argument);
}

TEST_CASE("exact bracket agrees with the numerical oracle") {
  // Run the independent numerical bracket before trusting the exact
  // gradients; the hamiltonians commute, so both sides must vanish.
  std::mt19937 rng(20240907);
  const BendSpec f{2, 1, 0};
  const BendSpec g{2, 1, 1};
  double max_partial = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const ClassicalPoint pt = random_point(2, 2, rng);
    const double numeric =
        fd_bracket(bend_functional(2, 1, 0), bend_functional(2, 1, 1), pt);
    CHECK(std::abs(numeric) < 1e-6);
    CHECK(poisson_bracket(f, g, pt) == Rat(0));
    max_partial = std::max(
        max_partial, std::abs(rat_to_double(classical_bending(pt, 2, 1, 1))));
  }
  CHECK(max_partial > 1.0);  // the sweep saw genuinely nonzero data
}

TEST_CASE("bending hamiltonians Poisson-commute at random points") {
  std::mt19937 rng(20240908);
  for (const auto& [N, n] : {std::pair<int, int>{2, 2}, {3, 3}}) {
    std::vector<BendSpec> specs;
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= 3; ++l)
        for (int alpha = 0; alpha <= l; ++alpha) specs.push_back({l, k, alpha});
    for (int trial = 0; trial < 2; ++trial) {
      const ClassicalPoint pt = random_point(N, n, rng);
      for (std::size_t i = 0; i < specs.size(); ++i)
        for (std::size_t j = i; j < specs.size(); ++j)
          CHECK(poisson_bracket(specs[i], specs[j], pt) == Rat(0));
    }
  }
}

TEST_CASE("quadratic symbols tie the bending family to the classical one") {
  std::mt19937 rng(20240909);
  for (int trial = 0; trial < 3; ++trial) {
    const ClassicalPoint pt = random_point(3, 3, rng);
    for (int k = 1; k <= 2; ++k) {
      Rat cross(0), tail_sq(0);
      for (int i = k + 1; i <= 3; ++i) {
        cross += symbol_split_casimir(pt, k, i);
        for (int j = k + 1; j <= 3; ++j)
          tail_sq += symbol_split_casimir(pt, i, j);
      }
      CHECK(classical_bending(pt, 2, k, 0) == symbol_split_casimir(pt, k, k));
      CHECK(classical_bending(pt, 2, k, 1) == Rat(2) * cross);
      CHECK(classical_bending(pt, 2, k, 2) == tail_sq);
    }
  }
}

TEST_CASE("quadratic bending family commutes and matches the two-site case") {
  const TensorSpace two = qubits(2);
  const OperatorFamily f2 = bending_quadratic_family(two);
  CHECK(f2.by_label("M1").op == split_casimir(two, 0, 1));

  const TensorSpace three = qubits(3);
  const OperatorFamily f3 = bending_quadratic_family(three);
  CHECK(f3.size() == 3);
  const CommuteReport rep = pairwise_commute(f3);
  CHECK(rep.all_commute);
  CHECK(rep.max_norm == 0.0);
  std::vector<LinOp> diag;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) diag.push_back(three.diagonal_gen(i, j));
  CHECK(commute_against(f3, diag).all_commute);
}

TEST_CASE("bending generators commute and reproduce the quadratic members") {
  const TensorSpace space = qubits(3);
  const Rat za(0), zb(1);
  const OperatorFamily alim = alim_generators(space, za, zb);
  CHECK(pairwise_commute(alim).all_commute);

  const OperatorFamily quad = bending_quadratic_family(space);
  const LinOp id = LinOp::identity(space.dim());
  for (int k = 1; k <= 2; ++k) {
    const std::string label = "A" + std::to_string(k) + ":S2[z1,m1]";
    const SpanResult res = in_span(
        alim.by_label(label).op,
        {quad.by_label("M" + std::to_string(k)).op, id});
    REQUIRE(res.member);
    CHECK(res.coeffs[0] == Rat(-1) / (za - zb));
  }
}

TEST_CASE("bending generator span does not depend on the two points") {
  const TensorSpace space = qubits(3);
  const OperatorFamily a = alim_generators(space, Rat(0), Rat(1));
  const OperatorFamily b = alim_generators(space, Rat(0), Rat(5));
  CHECK(family_spans_equal(a, b).equal());
}

TEST_CASE("two sites reduce the bending generators to the plain family") {
  const TensorSpace space = qubits(2);
  const OperatorFamily alim = alim_generators(space, Rat(0), Rat(1));
  const OperatorFamily plain =
      extract_generators(space, SitePoints({Rat(0), Rat(1)}));
  CHECK(family_spans_equal(alim, plain).equal());
}

TEST_CASE("predicted limit family commutes and spans both subsystems") {
  const TensorSpace space = qubits(3);
  DegenSchedule sched;
  sched.k = 1;
  sched.z_fixed = {Rat(0)};
  sched.z_center = Rat(1);
  sched.u = {Rat(0), Rat(1)};
  const OperatorFamily fam = predicted_limit_family(space, sched);

  bool has_outer = false, has_inner = false;
  for (const auto& label : fam.labels()) {
    has_outer |= label.rfind("outer:", 0) == 0;
    has_inner |= label.rfind("inner:", 0) == 0;
  }
  CHECK(has_outer);
  CHECK(has_inner);

  // Exact pairwise commutativity covers the cross pairs between the glued
  // outer system and the internal one.
  const CommuteReport rep = pairwise_commute(fam);
  CHECK(rep.all_commute);
  CHECK(rep.max_norm == 0.0);

  // The internal quadratic hamiltonian split_casimir(2,3)/(u_1 - u_2) lies
  // in the predicted span. (Its inner label may not survive the dedupe: at
  // these points the inner residue equals minus the outer family's top
  // coefficient at the center pole, so the two collapse into one member.)
  const SpanResult res = in_span(split_casimir(space, 1, 2), fam.ops());
  CHECK(res.member);
}

TEST_CASE("one glued point reduces the prediction to the plain family") {
  const TensorSpace space = qubits(3);
  DegenSchedule sched;
  sched.k = 2;
  sched.z_fixed = {Rat(0), Rat(2)};
  sched.z_center = Rat(5);
  sched.u = {Rat(3)};
  const OperatorFamily fam = predicted_limit_family(space, sched);

  // A single collapsing site contributes only central scalars, which the
  // projective dedupe folds away entirely on irreducible qubit sites.
  for (const auto& label : fam.labels()) CHECK(label.rfind("inner:", 0) != 0);

  const OperatorFamily plain =
      extract_generators(space, SitePoints({Rat(0), Rat(2), Rat(5)}));
  CHECK(family_spans_equal(fam, plain).equal());
}

TEST_CASE("fully glued schedule yields the central diagonal data") {
  const TensorSpace space = qubits(2);
  DegenSchedule sched;
  sched.k = 0;
  sched.z_center = Rat(0);
  sched.u = {Rat(0), Rat(1)};
  const OperatorFamily fam = predicted_limit_family(space, sched);
  CHECK(pairwise_commute(fam).all_commute);

  std::vector<LinOp> outer_ops;
  for (const auto& m : fam.members)
    if (m.label.rfind("outer:", 0) == 0) outer_ops.push_back(m.op);
  REQUIRE(!outer_ops.empty());
  std::vector<LinOp> diag;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) diag.push_back(space.diagonal_gen(i, j));
  OperatorFamily outer_fam;
  for (std::size_t i = 0; i < outer_ops.size(); ++i)
    outer_fam.members.push_back(
        {"outer" + std::to_string(i), outer_ops[i], ""});
  CHECK(commute_against(outer_fam, diag).all_commute);

  // The glued center adds nothing beyond the diagonal Casimirs the plain
  // family already carries, so the spans agree.
  const OperatorFamily plain =
      extract_generators(space, SitePoints({Rat(0), Rat(1)}));
  CHECK(family_spans_equal(fam, plain).equal());
}

TEST_CASE("quadratic members track the degeneration limit exactly") {
  const TensorSpace space = qubits(3);
  const Rat s = rat_of(1, 1000000);
  // Sites 2 and 3 collapse onto 1 along directions 0 and 1.
  const SitePoints pts({Rat(0), Rat(1), Rat(1) + s});
  const OperatorFamily quad = quadratic_family(space, pts);

  // Glued site: s*H_2(s) -> split_casimir(2,3)/(u_1 - u_2) = -split_casimir.
  const LinOp glued = scale(s, quad.members[1].op);
  const LinOp glued_target = scale(Rat(-1), split_casimir(space, 1, 2));
  CHECK(sub(glued, glued_target).frobenius() <=
        1e-5 * glued_target.frobenius());

  // Fixed site: H_1(s) -> (split_casimir(1,2) + split_casimir(1,3))/(z_1 - z).
  const LinOp fixed_target =
      scale(Rat(-1), add(split_casimir(space, 0, 1), split_casimir(space, 0, 2)));
  CHECK(sub(quad.members[0].op, fixed_target).frobenius() <=
        1e-5 * fixed_target.frobenius());
}

TEST_CASE("limit sweep converges with slope about one") {
  const TensorSpace space = qubits(3);
  DegenSchedule sched;
  sched.k = 1;
  sched.z_fixed = {Rat(0)};
  sched.z_center = Rat(1);
  sched.u = {Rat(0), Rat(1)};
  sched.s_values = {rat_of(1, 10), rat_of(1, 100), rat_of(1, 1000),
                    rat_of(1, 10000)};
  const LimitSweepReport report = limit_sweep(space, sched);

  CHECK(report.ambiguities.empty());
  CHECK(report.tail_monotone);
  CHECK(report.converged);
  CHECK(report.slope == doctest::Approx(1.0).epsilon(0.2));
  REQUIRE(report.max_dist.size() == 4);
  CHECK(report.max_dist.back() < 1e-2);

  bool saw_moving = false;
  for (const auto& trace : report.members) {
    REQUIRE(trace.dist.size() == 4);
    CHECK(!trace.matched.empty());
    if (trace.degenerate) continue;
    saw_moving = true;
    CHECK(trace.dist.back() <= trace.dist.front());
  }
  CHECK(saw_moving);
}
