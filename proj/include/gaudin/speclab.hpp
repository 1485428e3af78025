#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gaudin/family.hpp"
#include "gaudin/linop.hpp"

namespace gaudin {

/// Thrown by restrict_family when a basis vector's image leaves the span.
class InvarianceError : public std::runtime_error {
 public:
  InvarianceError(const std::string& member_label, int basis_idx,
                  double res);

  std::string member;
  int basis_index;
  double residual;
};

/// Exact restriction of every member to the span of the given vectors. The
/// span must be invariant under each member; this is verified with exact
/// solves, and a violation raises InvarianceError.
OperatorFamily restrict_family(const OperatorFamily& family,
                               const std::vector<std::vector<Rat>>& basis);

/// One joint eigenvalue tuple: values[f] pairs with the family member f.
struct JointTuple {
  std::vector<Cplx> values;
  int multiplicity = 0;
  std::vector<std::vector<Cplx>> basis;  // orthonormal, multiplicity vectors
};

struct SpectrumReport {
  std::vector<std::string> labels;
  int dim = 0;
  std::vector<JointTuple> tuples;
  bool simple = false;         // all multiplicities equal one
  bool indeterminate = false;  // ambiguity survived both strategies
  double min_gap = 0.0;        // smallest sup-distance between tuples
  unsigned seed = 0;           // combination coefficients draw
  std::vector<std::string> notes;
};

/// Joint spectrum of a pairwise-commuting family: diagonalizes a seeded
/// random rational combination of the members, then refines by iterative
/// eigenspace splitting and verifies every member is scalar on each final
/// subspace. Ambiguities are reported as indeterminate, never silently.
SpectrumReport joint_spectrum(const OperatorFamily& family,
                              unsigned seed = 20240911u);

struct GenericitySample {
  std::vector<Rat> z;
  bool simple = false;
  bool indeterminate = false;
  double min_gap = 0.0;
};

struct GenericityReport {
  int trials = 0;
  unsigned seed = 0;
  int simple_count = 0;
  int non_simple_count = 0;
  int indeterminate_count = 0;
  std::vector<GenericitySample> samples;
};

/// Samples bounded-height rational marked points (numerator and denominator
/// up to 1000, collisions rejected) and, for each draw, restricts the
/// quadratic plus extracted generator family of the space
/// S^{w_1}(C^N) (x) ... (x) S^{w_n}(C^N) to its singular subspace and takes
/// the joint spectrum. Every sampled z is recorded for replay.
GenericityReport genericity_sample(int N, const std::vector<int>& weights,
                                   int trials, unsigned seed);

}  // namespace gaudin
