#include "gaudin/speclab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "exact_solve.hpp"
#include "gaudin/gaudin_family.hpp"
#include "gaudin/parallel.hpp"
#include "gaudin/repspace.hpp"

namespace gaudin {

namespace {

using Eigen::MatrixXcd;

MatrixXcd to_dense(const LinOp& op) {
  const int d = op.dim();
  MatrixXcd m = MatrixXcd::Zero(d, d);
  if (op.is_rational()) {
    for (int r = 0; r < d; ++r)
      for (const auto& [c, val] : op.rat_row(r)) m(r, c) = rat_to_double(val);
  } else {
    const auto& data = op.cplx_data();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = data[static_cast<std::size_t>(r) * d + c];
  }
  return m;
}

detail::SVec dense_to_svec(const std::vector<Rat>& v) {
  detail::SVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(static_cast<long>(i), v[i]);
  return s;
}

// Exact image of a dense vector under a rational operator.
std::vector<Rat> apply(const LinOp& op, const std::vector<Rat>& v) {
  const int d = op.dim();
  std::vector<Rat> out(d, Rat(0));
  for (int r = 0; r < d; ++r) {
    Rat acc(0);
    for (const auto& [c, val] : op.rat_row(r)) acc += val * v[c];
    out[r] = std::move(acc);
  }
  return out;
}

double dense_norm(const std::vector<Rat>& v) {
  double s = 0.0;
  for (const auto& x : v) {
    const double d = rat_to_double(x);
    s += d * d;
  }
  return std::sqrt(s);
}

// Orthonormal spanning columns of block, detected at relative tolerance.
MatrixXcd orthonormal_columns(const MatrixXcd& block, int expected_rank,
                              bool* rank_ok) {
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(block);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  *rank_ok = rank == expected_rank;
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(block.rows(), rank);
  return q;
}

struct Splitter {
  const MatrixXcd* mat;
  double scale;  // max(1, Frobenius norm)
};

}  // namespace

InvarianceError::InvarianceError(const std::string& member_label,
                                 int basis_idx, double res)
    : std::runtime_error("subspace is not invariant: image of basis vector " +
                         std::to_string(basis_idx) + " under " + member_label +
                         " leaves the span (residual " + std::to_string(res) +
                         ")"),
      member(member_label),
      basis_index(basis_idx),
      residual(res) {}

OperatorFamily restrict_family(const OperatorFamily& family,
                               const std::vector<std::vector<Rat>>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty restriction basis");
  const long length = static_cast<long>(basis[0].size());
  for (const auto& b : basis)
    if (static_cast<long>(b.size()) != length)
      throw std::invalid_argument("restriction basis vectors differ in length");

  std::vector<detail::SVec> svecs;
  svecs.reserve(basis.size());
  for (const auto& b : basis) svecs.push_back(dense_to_svec(b));
  const detail::SpanSolver solver(length, svecs);
  const int r = static_cast<int>(basis.size());

  OperatorFamily out;
  out.name = family.name + " (restricted)";
  for (const auto& member : family.members) {
    if (!member.op.is_rational())
      throw std::invalid_argument("restriction needs rational members");
    if (member.op.dim() != length)
      throw std::invalid_argument("member dimension does not match basis");
    std::vector<std::tuple<int, int, Rat>> entries;
    for (int j = 0; j < r; ++j) {
      const std::vector<Rat> image = apply(member.op, basis[j]);
      const auto coords = solver.solve(dense_to_svec(image));
      if (!coords) {
        // Residual for the report: distance from the image to the span,
        // measured in double precision.
        Eigen::MatrixXd b(length, r);
        Eigen::VectorXd w(length);
        for (long p = 0; p < length; ++p) {
          for (int q = 0; q < r; ++q) b(p, q) = rat_to_double(basis[q][p]);
          w(p) = rat_to_double(image[p]);
        }
        const Eigen::VectorXd fit = b.colPivHouseholderQr().solve(w);
        const double res = (b * fit - w).norm() / std::max(1.0, dense_norm(image));
        throw InvarianceError(member.label, j, res);
      }
      for (int i = 0; i < r; ++i)
        if ((*coords)[i] != 0) entries.emplace_back(i, j, (*coords)[i]);
    }
    out.members.push_back({member.label, LinOp::from_triplets(r, entries),
                           member.provenance.empty()
                               ? "restricted"
                               : member.provenance + "; restricted"});
  }
  return out;
}

SpectrumReport joint_spectrum(const OperatorFamily& family, unsigned seed) {
  if (family.members.empty())
    throw std::invalid_argument("joint spectrum of an empty family");
  const int d = family.members.front().op.dim();
  for (const auto& m : family.members)
    if (m.op.dim() != d)
      throw std::invalid_argument("family members differ in dimension");
  const CommuteReport comm = pairwise_commute(family);
  if (!comm.all_commute)
    throw std::invalid_argument(
        "family does not commute: [" + comm.first_offender->first + ", " +
        comm.first_offender->second + "] != 0");

  SpectrumReport report;
  report.labels = family.labels();
  report.dim = d;
  report.seed = seed;

  std::vector<MatrixXcd> mats;
  mats.reserve(family.members.size());
  for (const auto& m : family.members) mats.push_back(to_dense(m.op));

  // Seeded generic rational combination of the members.
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(1, 97), den(1, 13);
  MatrixXcd g = MatrixXcd::Zero(d, d);
  for (const auto& mat : mats)
    g += (static_cast<double>(num(rng)) / static_cast<double>(den(rng))) * mat;

  std::vector<Splitter> splitters;
  splitters.push_back({&g, std::max(1.0, g.norm())});
  for (const auto& mat : mats)
    splitters.push_back({&mat, std::max(1.0, mat.norm())});

  std::vector<MatrixXcd> subspaces = {MatrixXcd::Identity(d, d)};
  bool used_fallback = false;
  for (std::size_t si = 0; si < splitters.size(); ++si) {
    const Splitter& sp = splitters[si];
    std::vector<MatrixXcd> next;
    for (const MatrixXcd& q : subspaces) {
      const int k = static_cast<int>(q.cols());
      if (k == 1) {
        next.push_back(q);
        continue;
      }
      if (si > 0) used_fallback = true;
      const MatrixXcd rest = q.adjoint() * (*sp.mat) * q;
      const double inv_res = ((*sp.mat) * q - q * rest).norm();
      if (inv_res > 1e-8 * sp.scale) {
        report.indeterminate = true;
        report.notes.push_back("subspace drifted from invariance (residual " +
                               std::to_string(inv_res) + ")");
        next.push_back(q);
        continue;
      }
      Eigen::ComplexEigenSolver<MatrixXcd> es(rest);
      if (es.info() != Eigen::Success) {
        report.indeterminate = true;
        report.notes.push_back("eigen solve failed on a subspace restriction");
        next.push_back(q);
        continue;
      }
      std::vector<Cplx> vals(es.eigenvalues().data(),
                             es.eigenvalues().data() + k);
      const auto groups = cluster(vals, 1e-8);
      if (groups.size() == 1) {
        next.push_back(q);
        continue;
      }
      const std::size_t rollback_mark = next.size();
      for (const auto& group : groups) {
        MatrixXcd block(k, group.size());
        for (std::size_t c = 0; c < group.size(); ++c)
          block.col(static_cast<int>(c)) = es.eigenvectors().col(group[c]);
        bool rank_ok = true;
        const MatrixXcd sub =
            orthonormal_columns(block, static_cast<int>(group.size()), &rank_ok);
        if (!rank_ok) {
          report.indeterminate = true;
          report.notes.push_back(
              "deficient eigenvector block; keeping the subspace whole");
          next.resize(rollback_mark);
          next.push_back(q);
          break;
        }
        next.push_back(q * sub);
      }
    }
    subspaces = std::move(next);
  }
  if (used_fallback)
    report.notes.push_back("eigenspace splitting refined the first pass");

  // Read one value per member on every final subspace and insist the member
  // is scalar there.
  struct RawTuple {
    std::vector<Cplx> values;
    MatrixXcd basis;
  };
  std::vector<RawTuple> raw;
  for (const MatrixXcd& q : subspaces) {
    RawTuple t;
    t.basis = q;
    const int k = static_cast<int>(q.cols());
    for (std::size_t f = 0; f < mats.size(); ++f) {
      const MatrixXcd rest = q.adjoint() * mats[f] * q;
      const Cplx mean = rest.trace() / static_cast<double>(k);
      const double dev = (rest - mean * MatrixXcd::Identity(k, k)).norm();
      if (dev > 1e-8 * std::max(1.0, mats[f].norm())) {
        report.indeterminate = true;
        report.notes.push_back("member " + report.labels[f] +
                               " is not scalar on a final subspace (deviation " +
                               std::to_string(dev) + ")");
      }
      t.values.push_back(mean);
    }
    raw.push_back(std::move(t));
  }

  // Merge subspaces carrying the same tuple (relative tolerance per member).
  std::vector<double> scales;
  for (const auto& mat : mats) {
    double m = 1.0;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m = std::max(m, std::abs(mat(r, c)));
    scales.push_back(m);
  }
  const auto same_tuple = [&](const std::vector<Cplx>& a,
                              const std::vector<Cplx>& b) {
    for (std::size_t f = 0; f < a.size(); ++f)
      if (std::abs(a[f] - b[f]) > 1e-8 * scales[f]) return false;
    return true;
  };
  for (auto& t : raw) {
    bool merged = false;
    for (auto& existing : report.tuples) {
      if (!same_tuple(t.values, existing.values)) continue;
      existing.multiplicity += static_cast<int>(t.basis.cols());
      for (int c = 0; c < t.basis.cols(); ++c) {
        std::vector<Cplx> v(d);
        for (int r = 0; r < d; ++r) v[r] = t.basis(r, c);
        existing.basis.push_back(std::move(v));
      }
      merged = true;
      break;
    }
    if (merged) continue;
    JointTuple jt;
    jt.values = t.values;
    jt.multiplicity = static_cast<int>(t.basis.cols());
    for (int c = 0; c < t.basis.cols(); ++c) {
      std::vector<Cplx> v(d);
      for (int r = 0; r < d; ++r) v[r] = t.basis(r, c);
      jt.basis.push_back(std::move(v));
    }
    report.tuples.push_back(std::move(jt));
  }

  int total = 0;
  for (const auto& t : report.tuples) total += t.multiplicity;
  if (total != d) {
    report.indeterminate = true;
    report.notes.push_back("multiplicities sum to " + std::to_string(total) +
                           " instead of the dimension " + std::to_string(d));
  }
  report.simple = !report.tuples.empty();
  for (const auto& t : report.tuples) report.simple &= t.multiplicity == 1;

  if (report.tuples.size() >= 2) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < report.tuples.size(); ++a)
      for (std::size_t b = a + 1; b < report.tuples.size(); ++b) {
        double dist = 0.0;
        for (std::size_t f = 0; f < report.labels.size(); ++f)
          dist = std::max(dist, std::abs(report.tuples[a].values[f] -
                                         report.tuples[b].values[f]));
        gap = std::min(gap, dist);
      }
    report.min_gap = gap;
  } else {
    report.min_gap = 0.0;
    report.notes.push_back("fewer than two tuples; min_gap not meaningful");
  }
  return report;
}

GenericityReport genericity_sample(int N, const std::vector<int>& weights,
                                   int trials, unsigned seed) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  if (N < 1 || weights.empty())
    throw std::invalid_argument("need gl_N with N >= 1 and at least one site");

  std::vector<ModuleRep> factors;
  for (int w : weights) factors.push_back(symmetric_power(N, w));
  const TensorSpace space(std::move(factors));
  const std::vector<std::vector<Rat>> sing = space.singular_subspace();
  const int n = static_cast<int>(weights.size());

  GenericityReport report;
  report.trials = trials;
  report.seed = seed;
  report.samples.resize(trials);

  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    const unsigned trial_seed =
        seed ^ (0x9e3779b9u * static_cast<unsigned>(t + 1));
    std::mt19937 rng(trial_seed);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
    std::vector<Rat> z;
    while (static_cast<int>(z.size()) < n) {
      const Rat candidate = rat_of(num(rng), den(rng));
      bool fresh = true;
      for (const Rat& p : z) fresh &= p != candidate;
      if (fresh) z.push_back(candidate);
    }

    const SitePoints pts(z);
    OperatorFamily fam = quadratic_family(space, pts);
    OperatorFamily gens = extract_generators(space, pts);
    for (auto& m : gens.members) fam.members.push_back(std::move(m));
    const OperatorFamily restricted = restrict_family(fam, sing);
    const SpectrumReport spec = joint_spectrum(restricted, trial_seed);

    GenericitySample& sample = report.samples[t];
    sample.z = z;
    sample.simple = spec.simple;
    sample.indeterminate = spec.indeterminate;
    sample.min_gap = spec.min_gap;
  });

  for (const auto& sample : report.samples) {
    if (sample.indeterminate)
      ++report.indeterminate_count;
    else if (sample.simple)
      ++report.simple_count;
    else
      ++report.non_simple_count;
  }
  return report;
}

}  // namespace gaudin
