#include "gaudin/family.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>

#include "gaudin/parallel.hpp"

namespace gaudin {

std::vector<LinOp> OperatorFamily::ops() const {
  std::vector<LinOp> out;
  out.reserve(members.size());
  for (const FamilyMember& m : members) out.push_back(m.op);
  return out;
}

std::vector<std::string> OperatorFamily::labels() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const FamilyMember& m : members) out.push_back(m.label);
  return out;
}

const FamilyMember& OperatorFamily::by_label(const std::string& label) const {
  for (const FamilyMember& m : members)
    if (m.label == label) return m;
  throw std::out_of_range("no family member labelled " + label);
}

namespace {

CommuteReport sweep_pairs(
    const std::vector<std::pair<int, int>>& pairs,
    const std::function<const LinOp&(int)>& left,
    const std::function<const LinOp&(int)>& right,
    const std::function<std::pair<std::string, std::string>(int, int)>& names,
    double tol_rel, int threads) {
  CommuteReport report;
  report.pairs_checked = static_cast<int>(pairs.size());
  std::vector<double> norms(pairs.size(), 0.0);
  std::vector<char> failed(pairs.size(), 0);
  parallel_for(
      pairs.size(),
      [&](std::size_t t) {
        const auto& [i, j] = pairs[t];
        const LinOp& a = left(i);
        const LinOp& b = right(j);
        const LinOp c = commutator(a, b);
        if (a.is_rational() && b.is_rational()) {
          if (!c.is_zero()) {
            failed[t] = 1;
            norms[t] = c.frobenius();
          }
        } else {
          const double norm = c.frobenius();
          const double scale = std::max(1.0, a.frobenius() * b.frobenius());
          norms[t] = norm / scale;
          if (norms[t] > tol_rel) failed[t] = 1;
        }
      },
      threads);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    report.max_norm = std::max(report.max_norm, norms[t]);
    if (failed[t] && report.all_commute) {
      report.all_commute = false;
      report.first_offender = names(pairs[t].first, pairs[t].second);
    }
  }
  return report;
}

}  // namespace

CommuteReport pairwise_commute(const OperatorFamily& family, double tol_rel,
                               int threads) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < family.size(); ++i)
    for (int j = i + 1; j < family.size(); ++j) pairs.emplace_back(i, j);
  return sweep_pairs(
      pairs, [&](int i) -> const LinOp& { return family.members[i].op; },
      [&](int j) -> const LinOp& { return family.members[j].op; },
      [&](int i, int j) {
        return std::make_pair(family.members[i].label, family.members[j].label);
      },
      tol_rel, threads);
}

CommuteReport commute_against(const OperatorFamily& family,
                              const std::vector<LinOp>& others, double tol_rel,
                              int threads) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < family.size(); ++i)
    for (int j = 0; j < static_cast<int>(others.size()); ++j)
      pairs.emplace_back(i, j);
  return sweep_pairs(
      pairs, [&](int i) -> const LinOp& { return family.members[i].op; },
      [&](int j) -> const LinOp& { return others[j]; },
      [&](int i, int j) {
        return std::make_pair(family.members[i].label,
                              "external#" + std::to_string(j));
      },
      tol_rel, threads);
}

std::optional<Rat> proportionality(const LinOp& a, const LinOp& b) {
  if (!a.is_rational() || !b.is_rational() || a.dim() != b.dim())
    return std::nullopt;
  if (b.is_zero()) return a.is_zero() ? std::optional<Rat>(Rat(0)) : std::nullopt;
  // c is forced by the first nonzero entry of b; verify a == c*b exactly.
  Rat c(0);
  for (int r = 0; r < b.dim(); ++r) {
    const RatRow& row = b.rat_row(r);
    if (!row.empty()) {
      c = a.rat_entry(r, row.front().first) / row.front().second;
      break;
    }
  }
  if (a != scale(c, b)) return std::nullopt;
  return c;
}

OperatorFamily projective_dedupe(const OperatorFamily& family) {
  OperatorFamily out;
  out.name = family.name;
  for (const FamilyMember& m : family.members) {
    bool dup = false;
    for (FamilyMember& kept : out.members) {
      if (proportionality(m.op, kept.op)) {
        kept.provenance += "; collapses " + m.label;
        dup = true;
        break;
      }
    }
    if (!dup) out.members.push_back(m);
  }
  return out;
}

SpanCompare family_spans_equal(const OperatorFamily& f, const OperatorFamily& g) {
  SpanCompare cmp;
  const std::vector<LinOp> fo = f.ops();
  const std::vector<LinOp> go = g.ops();
  for (const FamilyMember& m : f.members) {
    if (!in_span(m.op, go).member) {
      cmp.forward = false;
      cmp.witness = f.name + ":" + m.label;
      return cmp;
    }
  }
  for (const FamilyMember& m : g.members) {
    if (!in_span(m.op, fo).member) {
      cmp.backward = false;
      cmp.witness = g.name + ":" + m.label;
      return cmp;
    }
  }
  return cmp;
}

}  // namespace gaudin
