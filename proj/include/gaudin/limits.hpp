#pragma once

#include <string>
#include <vector>

#include "gaudin/family.hpp"
#include "gaudin/gaudin_family.hpp"
#include "gaudin/repspace.hpp"

namespace gaudin {

/// Degeneration schedule: sites 1..k stay at z_fixed while the remaining
/// n-k sites collapse onto z_center along z_center + s*u_j as s -> 0.
struct DegenSchedule {
  int k = 0;
  std::vector<Rat> z_fixed;   // size k
  Rat z_center;
  std::vector<Rat> u;         // size n-k, pairwise distinct
  std::vector<Rat> s_values;  // decreasing, positive

  /// Throws std::invalid_argument unless the schedule is admissible for an
  /// n-site system (all point sets pairwise distinct at every s).
  void validate(int n_sites) const;

  /// The perturbed marked points z_fixed ++ (z_center + s*u_j).
  std::vector<Rat> points_at(const Rat& s) const;
};

/// Family the degeneration converges to: generators extracted on the glued
/// space [V_1..V_k, composite(V_{k+1}..V_n)] at (z_fixed, z_center), joined
/// with the internal family of the collapsing sites at the points u lifted
/// through the identity on the fixed sites. Projectively deduplicated;
/// labels carry an "outer:"/"inner:" prefix.
OperatorFamily predicted_limit_family(const TensorSpace& space,
                                      const DegenSchedule& sched);

/// Distance history of one perturbed generator across the s sweep.
struct MemberTrace {
  std::string label;         // perturbed-family label (stable across s)
  std::vector<double> dist;  // projective distance to the matched member
  std::string matched;       // predicted label matched at the smallest s
  bool degenerate = false;   // already on the limit at every s (dist ~ 0)
};

struct LimitSweepReport {
  std::vector<Rat> s_values;
  std::vector<MemberTrace> members;
  std::vector<double> max_dist;  // per s, over non-degenerate members
  bool tail_monotone = false;    // max_dist strictly decreasing on the tail
  double slope = 0.0;            // log-log fit of max_dist against s
  bool converged = false;        // tail_monotone && slope >= 0.8
  std::vector<std::string> ambiguities;
};

/// Extracts the generator family at the perturbed points for every s and
/// measures projective distances (unit Frobenius normalization, sign-free)
/// to predicted_limit_family under greedy nearest-distance matching.
LimitSweepReport limit_sweep(const TensorSpace& space,
                             const DegenSchedule& sched, int trunc = -1);

/// Quadratic members of the bending family: M_k = sum_{j>k} split_casimir
/// between sites k and j for k = 1..n-1, plus the quadratic Casimir of the
/// diagonal action.
OperatorFamily bending_quadratic_family(const TensorSpace& space);

/// Bending generators: for each k = 1..n-1 the two-point generator family on
/// [V_k, composite(V_{k+1}..V_n)] at (z_a, z_b), lifted through the identity
/// on the sites before k. The span does not depend on the two points.
OperatorFamily alim_generators(const TensorSpace& space, const Rat& z_a,
                               const Rat& z_b);

/// Point of gl_N + ... + gl_N (n summands); X[i] is row-major N x N.
struct ClassicalPoint {
  int n_gl = 0;
  std::vector<std::vector<Rat>> X;

  int sites() const { return static_cast<int>(X.size()); }
  const Rat& entry(int site, int p, int q) const;
};

/// Identifier (l, k, alpha) of the classical bending hamiltonian: the
/// coefficient of z^alpha in Tr((X_k + z*(X_{k+1}+...+X_n))^l); k is 1-based.
struct BendSpec {
  int l = 0;
  int k = 0;
  int alpha = 0;
};

/// Exact value of the (l, k, alpha) hamiltonian at the point.
Rat classical_bending(const ClassicalPoint& pt, int l, int k, int alpha);

/// Exact Lie-Poisson bracket {f, g} = sum_j Tr(X_j [grad_j f, grad_j g]) of
/// two bending hamiltonians; gradients are read off matrix-polynomial powers.
Rat poisson_bracket(const BendSpec& f, const BendSpec& g,
                    const ClassicalPoint& pt);

/// Commutative symbol of the split Casimir between sites i and j (1-based),
/// evaluated at the point: Tr(X_i X_j).
Rat symbol_split_casimir(const ClassicalPoint& pt, int i, int j);

}  // namespace gaudin
