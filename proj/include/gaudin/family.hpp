#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaudin/linop.hpp"

namespace gaudin {

struct FamilyMember {
  std::string label;       // stable display name, e.g. "S2[z1,m1]"
  LinOp op;
  std::string provenance;  // how the member was produced, e.g. "residue order 1"
};

/// Named list of operators on one space that is expected to commute pairwise.
/// Commutativity is established by the checks below, not at construction.
struct OperatorFamily {
  std::string name;
  std::vector<FamilyMember> members;

  int size() const { return static_cast<int>(members.size()); }
  std::vector<LinOp> ops() const;
  std::vector<std::string> labels() const;
  const FamilyMember& by_label(const std::string& label) const;
};

struct CommuteReport {
  bool all_commute = true;
  // Largest commutator norm seen: exact 0 iff all_commute on rational input.
  double max_norm = 0.0;
  std::optional<std::pair<std::string, std::string>> first_offender;
  int pairs_checked = 0;
};

/// Pairwise commutator sweep. Rational members are checked exactly; complex
/// members against tol_rel * |A| * |B|.
CommuteReport pairwise_commute(const OperatorFamily& family,
                               double tol_rel = 1e-12, int threads = 0);

/// Checks [member, other] = 0 for every member against every op in `others`.
CommuteReport commute_against(const OperatorFamily& family,
                              const std::vector<LinOp>& others,
                              double tol_rel = 1e-12, int threads = 0);

/// Exact scalar c with a == c*b, if one exists (rational operators).
std::optional<Rat> proportionality(const LinOp& a, const LinOp& b);

/// Drops members that are exact scalar multiples of an earlier member.
/// Collapsed labels are recorded in the survivor's provenance.
OperatorFamily projective_dedupe(const OperatorFamily& family);

struct SpanCompare {
  bool forward = true;    // every member of f lies in span(g)
  bool backward = true;   // every member of g lies in span(f)
  std::optional<std::string> witness;  // first member that failed

  bool equal() const { return forward && backward; }
};

/// Exact mutual span inclusion of two member lists.
SpanCompare family_spans_equal(const OperatorFamily& f, const OperatorFamily& g);

}  // namespace gaudin
