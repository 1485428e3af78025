#include "gaudin/symgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gaudin/speclab.hpp"

namespace gaudin {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_standard_factors(const TensorSpace& space) {
  const int N = space.n_gl();
  for (int s = 0; s < space.sites(); ++s) {
    const ModuleRep& f = space.factor(s);
    bool standard = f.dim == N;
    for (int i = 0; standard && i < N; ++i)
      for (int j = 0; standard && j < N; ++j)
        standard = f.gen(i, j) == LinOp::from_triplets(N, {{i, j, Rat(1)}});
    require(standard, "slot permutations need standard-module factors");
  }
}

// Fills one standard tableau box at a time; fill[r] counts boxes placed in
// row r so far.
void enumerate_syt(const std::vector<int>& shape, std::vector<int>& fill,
                   std::vector<long>& contents, int placed, int total,
                   std::vector<std::vector<long>>& out) {
  if (placed == total) {
    out.push_back(contents);
    return;
  }
  for (std::size_t r = 0; r < shape.size(); ++r) {
    if (fill[r] >= shape[r]) continue;
    if (r > 0 && fill[r - 1] <= fill[r]) continue;
    const long content = fill[r] - static_cast<long>(r);
    ++fill[r];
    if (placed > 0) contents.push_back(content);  // the box of 1 is dropped
    enumerate_syt(shape, fill, contents, placed + 1, total, out);
    if (placed > 0) contents.pop_back();
    --fill[r];
  }
}

void enumerate_partitions(int remaining, int max_part, int max_rows,
                          std::vector<int>& current,
                          std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  if (static_cast<int>(current.size()) == max_rows) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    enumerate_partitions(remaining - part, part, max_rows, current, out);
    current.pop_back();
  }
}

}  // namespace

PermOp make_perm_op(const TensorSpace& space, std::vector<int> perm) {
  check_standard_factors(space);
  const int n = space.sites();
  require(static_cast<int>(perm.size()) == n,
          "permutation must cover every slot");
  std::vector<bool> seen(n, false);
  for (int image : perm) {
    require(image >= 0 && image < n && !seen[image],
            "not a permutation of the slots");
    seen[image] = true;
  }
  std::vector<std::tuple<int, int, Rat>> entries;
  std::vector<int> moved(n);
  for (long idx = 0; idx < space.dim(); ++idx) {
    const std::vector<int> digits = space.digits_of(idx);
    for (int s = 0; s < n; ++s) moved[perm[s]] = digits[s];
    entries.emplace_back(static_cast<int>(space.index_of(moved)),
                         static_cast<int>(idx), Rat(1));
  }
  return {std::move(perm), LinOp::from_triplets(space.dim(), entries)};
}

PermOp compose(const PermOp& a, const PermOp& b) {
  require(a.perm.size() == b.perm.size(), "slot counts differ");
  std::vector<int> perm(a.perm.size());
  for (std::size_t s = 0; s < perm.size(); ++s) perm[s] = a.perm[b.perm[s]];
  return {std::move(perm), mul(a.op, b.op)};
}

LinOp transposition(const TensorSpace& space, int i, int j) {
  require(i != j, "a transposition needs two distinct slots");
  std::vector<int> perm(space.sites());
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm.at(i), perm.at(j));
  return make_perm_op(space, std::move(perm)).op;
}

OperatorFamily jm_elements(const TensorSpace& space) {
  check_standard_factors(space);
  require(space.sites() >= 2, "Jucys-Murphy elements need at least two slots");
  OperatorFamily fam;
  fam.name = "Jucys-Murphy elements";
  for (int i = 1; i < space.sites(); ++i) {
    LinOp x = LinOp::zeros(space.dim());
    for (int j = 0; j < i; ++j) x = add(x, transposition(space, j, i));
    fam.members.push_back({"X" + std::to_string(i + 1), std::move(x),
                           "sum of transpositions with earlier slots"});
  }
  return fam;
}

SYTContent syt_contents(const std::vector<int>& partition) {
  require(!partition.empty(), "empty partition");
  int total = 0;
  for (std::size_t r = 0; r < partition.size(); ++r) {
    require(partition[r] >= 1, "partition parts must be positive");
    require(r == 0 || partition[r] <= partition[r - 1],
            "partition parts must be weakly decreasing");
    total += partition[r];
  }
  SYTContent result;
  result.partition = partition;
  std::vector<int> fill(partition.size(), 0);
  std::vector<long> contents;
  enumerate_syt(partition, fill, contents, 0, total, result.contents);
  std::sort(result.contents.begin(), result.contents.end());
  return result;
}

std::vector<std::vector<long>> expected_jm_tuples(int max_rows, int n) {
  std::vector<std::vector<int>> partitions;
  std::vector<int> current;
  enumerate_partitions(n, n, max_rows, current, partitions);
  std::vector<std::vector<long>> tuples;
  for (const auto& partition : partitions) {
    const SYTContent c = syt_contents(partition);
    tuples.insert(tuples.end(), c.contents.begin(), c.contents.end());
  }
  std::sort(tuples.begin(), tuples.end());
  return tuples;
}

JMSpectrumReport jm_spectrum_check(const TensorSpace& space) {
  const int n = space.sites();
  const int N = space.n_gl();
  require(N >= n, "need N >= n so that every partition of n has few enough rows");
  const OperatorFamily jm = jm_elements(space);
  const std::vector<std::vector<Rat>> sing = space.singular_subspace();
  const OperatorFamily restricted = restrict_family(jm, sing);
  const SpectrumReport spec = joint_spectrum(restricted);

  JMSpectrumReport report;
  report.subspace_dim = static_cast<int>(sing.size());
  report.expected = expected_jm_tuples(N, n);
  report.notes = spec.notes;

  bool round_ok = true;
  report.all_multiplicity_one = true;
  for (const auto& tuple : spec.tuples) {
    std::vector<long> rounded;
    for (const Cplx& v : tuple.values) {
      const double r = std::round(v.real());
      if (std::abs(v.real() - r) > 1e-6 || std::abs(v.imag()) > 1e-6) {
        round_ok = false;
        report.notes.push_back("eigenvalue " + std::to_string(v.real()) +
                               (v.imag() < 0 ? "-" : "+") +
                               std::to_string(std::abs(v.imag())) +
                               "i is not an integer within 1e-6");
      }
      rounded.push_back(static_cast<long>(r));
    }
    for (int copy = 0; copy < tuple.multiplicity; ++copy)
      report.observed.push_back(rounded);
    report.all_multiplicity_one &= tuple.multiplicity == 1;
  }
  std::sort(report.observed.begin(), report.observed.end());
  report.indeterminate = spec.indeterminate;
  if (spec.indeterminate)
    report.notes.push_back("joint spectrum reported indeterminate clusters");

  report.pass = round_ok && !spec.indeterminate &&
                report.all_multiplicity_one &&
                report.observed == report.expected;
  return report;
}

}  // namespace gaudin
