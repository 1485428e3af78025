#include "gaudin/limits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "gaudin/parallel.hpp"

namespace gaudin {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_distinct(const std::vector<Rat>& pts, const std::string& what) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      require(pts[i] != pts[j], what);
}

std::vector<ModuleRep> tail_factors(const TensorSpace& space, int from) {
  std::vector<ModuleRep> tail;
  for (int i = from; i < space.sites(); ++i) tail.push_back(space.factor(i));
  return tail;
}

long head_dim(const TensorSpace& space, int upto) {
  long d = 1;
  for (int i = 0; i < upto; ++i) d *= space.factor(i).dim;
  return d;
}

// Flattened double image of a rational operator, scaled to unit Frobenius
// norm. The zero operator stays zero.
std::vector<double> unit_vector(const LinOp& op) {
  const int d = op.dim();
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r)
    for (const auto& [c, val] : op.rat_row(r))
      v[static_cast<std::size_t>(r) * d + c] = rat_to_double(val);
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (double& x : v) x /= nrm;
  return v;
}

// Projective distance between unit vectors: min(|a-b|, |a+b|).
double proj_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double dm = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = a[i] - b[i], p = a[i] + b[i];
    dm += m * m;
    dp += p * p;
  }
  return std::sqrt(std::min(dm, dp));
}

// Index of the projective representative of each member: the first earlier
// member it is an exact scalar multiple of, else itself.
std::vector<int> representatives(const OperatorFamily& fam) {
  std::vector<int> rep(fam.members.size());
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    rep[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < i; ++j) {
      if (rep[j] != static_cast<int>(j)) continue;
      if (proportionality(fam.members[i].op, fam.members[j].op)) {
        rep[i] = static_cast<int>(j);
        break;
      }
    }
  }
  return rep;
}

struct Matching {
  std::vector<int> match;      // survivor index -> predicted index (or -1)
  std::vector<double> dist;    // survivor index -> matched distance
  std::vector<std::string> notes;
};

// Greedy nearest-distance one-to-one assignment of survivors to predicted
// members; leftovers (more survivors than predictions) fall back to the
// nearest prediction with replacement and are noted.
Matching greedy_match(const std::vector<std::vector<double>>& q,
                      const std::vector<std::vector<double>>& p,
                      const std::vector<std::string>& q_labels,
                      const std::vector<std::string>& p_labels,
                      const std::string& where) {
  const int nq = static_cast<int>(q.size());
  const int np = static_cast<int>(p.size());
  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(nq) * np);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) pairs.emplace_back(proj_dist(q[i], p[j]), i, j);
  std::sort(pairs.begin(), pairs.end());

  Matching m;
  m.match.assign(nq, -1);
  m.dist.assign(nq, 0.0);
  std::vector<bool> p_used(np, false);
  int assigned = 0;
  for (const auto& [d, i, j] : pairs) {
    if (assigned == std::min(nq, np)) break;
    if (m.match[i] >= 0 || p_used[j]) continue;
    m.match[i] = j;
    m.dist[i] = d;
    p_used[j] = true;
    ++assigned;
  }
  for (int i = 0; i < nq; ++i) {
    if (m.match[i] >= 0) continue;
    double best = -1.0;
    int best_j = -1;
    for (int j = 0; j < np; ++j) {
      const double d = proj_dist(q[i], p[j]);
      if (best_j < 0 || d < best) best = d, best_j = j;
    }
    m.match[i] = best_j;
    m.dist[i] = best;
    m.notes.push_back(where + ": " + q_labels[i] +
                      " matched with replacement (more members than "
                      "predictions)");
  }
  // Ambiguity alarm: several predictions indistinguishably close to one
  // perturbed member.
  for (int i = 0; i < nq; ++i) {
    int close = 0;
    for (int j = 0; j < np; ++j)
      if (proj_dist(q[i], p[j]) <= 1e-6) ++close;
    if (close >= 2)
      m.notes.push_back(where + ": " + q_labels[i] + " has " +
                        std::to_string(close) +
                        " predicted members within 1e-6; nearest kept: " +
                        p_labels[m.match[i]]);
  }
  return m;
}

using Mat = std::vector<Rat>;  // N x N row-major

Mat mat_zero(int N) { return Mat(static_cast<std::size_t>(N) * N, Rat(0)); }

Mat mat_id(int N) {
  Mat m = mat_zero(N);
  for (int i = 0; i < N; ++i) m[static_cast<std::size_t>(i) * N + i] = Rat(1);
  return m;
}

Mat mat_add(const Mat& a, const Mat& b) {
  Mat r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Mat mat_mul(const Mat& a, const Mat& b, int N) {
  Mat r = mat_zero(N);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < N; ++l) {
      const Rat& x = a[static_cast<std::size_t>(i) * N + l];
      if (x == 0) continue;
      for (int j = 0; j < N; ++j)
        r[static_cast<std::size_t>(i) * N + j] +=
            x * b[static_cast<std::size_t>(l) * N + j];
    }
  return r;
}

Rat mat_trace(const Mat& a, int N) {
  Rat t(0);
  for (int i = 0; i < N; ++i) t += a[static_cast<std::size_t>(i) * N + i];
  return t;
}

// Coefficients (by z-power) of (X + z*Y)^power.
std::vector<Mat> pencil_power(const Mat& X, const Mat& Y, int N, int power) {
  std::vector<Mat> coeffs = {mat_id(N)};
  for (int step = 0; step < power; ++step) {
    std::vector<Mat> next(coeffs.size() + 1, mat_zero(N));
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
      next[a] = mat_add(next[a], mat_mul(coeffs[a], X, N));
      next[a + 1] = mat_add(next[a + 1], mat_mul(coeffs[a], Y, N));
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

Mat point_matrix(const ClassicalPoint& pt, int site_1based) {
  const int N = pt.n_gl;
  Mat m = mat_zero(N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      m[static_cast<std::size_t>(p) * N + q] = pt.entry(site_1based - 1, p, q);
  return m;
}

Mat glued_tail(const ClassicalPoint& pt, int k_1based) {
  Mat y = mat_zero(pt.n_gl);
  for (int i = k_1based + 1; i <= pt.sites(); ++i)
    y = mat_add(y, point_matrix(pt, i));
  return y;
}

void check_bend_spec(const ClassicalPoint& pt, int l, int k, int alpha) {
  require(pt.n_gl >= 1 && pt.sites() >= 1, "empty classical point");
  for (const auto& x : pt.X)
    require(static_cast<int>(x.size()) == pt.n_gl * pt.n_gl,
            "classical point matrix has wrong shape");
  require(l >= 1, "hamiltonian degree must be positive");
  require(k >= 1 && k <= pt.sites(), "site index out of range");
  require(alpha >= 0 && alpha <= l, "pencil coefficient out of range");
}

// Gradient matrices of the (l, k, alpha) hamiltonian at the point: the
// differential of Tr(M(z)^l), M(z) = X_k + z*(X_{k+1}+...), pairs X_j with
// l * (coefficient of z^alpha in c_j(z) * M(z)^{l-1}), c_j = [j=k] + z[j>k].
std::vector<Mat> bend_gradients(const BendSpec& f, const ClassicalPoint& pt) {
  const int N = pt.n_gl;
  const std::vector<Mat> pw =
      pencil_power(point_matrix(pt, f.k), glued_tail(pt, f.k), N, f.l - 1);
  const auto coeff = [&](int a) -> Mat {
    if (a < 0 || a >= static_cast<int>(pw.size())) return mat_zero(N);
    return pw[a];
  };
  const Mat at_alpha = coeff(f.alpha);
  const Mat below = coeff(f.alpha - 1);
  std::vector<Mat> grads(pt.sites(), mat_zero(N));
  const Rat l_scale(f.l);
  for (int j = 1; j <= pt.sites(); ++j) {
    Mat g = mat_zero(N);
    if (j == f.k) g = at_alpha;
    if (j > f.k) g = mat_add(g, below);
    for (auto& e : g) e *= l_scale;
    grads[j - 1] = std::move(g);
  }
  return grads;
}

}  // namespace

void DegenSchedule::validate(int n_sites) const {
  require(k >= 0 && k < n_sites, "fixed-point count must lie in [0, n)");
  require(static_cast<int>(z_fixed.size()) == k,
          "z_fixed size must equal the fixed-point count");
  require(static_cast<int>(u.size()) == n_sites - k,
          "u must list one direction per collapsing site");
  check_distinct(u, "collapse directions u must be pairwise distinct");
  std::vector<Rat> fixed = z_fixed;
  fixed.push_back(z_center);
  check_distinct(fixed, "fixed points and center must be pairwise distinct");
  Rat prev;
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    require(s_values[i] > 0, "s values must be positive");
    if (i > 0) require(s_values[i] < prev, "s values must decrease");
    prev = s_values[i];
    check_distinct(points_at(s_values[i]),
                   "perturbed points collide at s = " + rat_str(s_values[i]));
  }
}

std::vector<Rat> DegenSchedule::points_at(const Rat& s) const {
  std::vector<Rat> pts = z_fixed;
  for (const Rat& dir : u) pts.push_back(z_center + s * dir);
  return pts;
}

OperatorFamily predicted_limit_family(const TensorSpace& space,
                                      const DegenSchedule& sched) {
  const int n = space.sites();
  sched.validate(n);
  OperatorFamily out;
  out.name = "limit family";

  // Outer system: fixed sites kept, collapsing sites glued into one factor.
  // Its operators act on the same coded basis as the full space, so no lift
  // is needed.
  {
    std::vector<ModuleRep> facs;
    for (int i = 0; i < sched.k; ++i) facs.push_back(space.factor(i));
    facs.push_back(diag_composite(tail_factors(space, sched.k)));
    const TensorSpace outer(std::move(facs));
    std::vector<Rat> pts = sched.z_fixed;
    pts.push_back(sched.z_center);
    OperatorFamily fam = extract_generators(outer, SitePoints(pts));
    for (auto& m : fam.members)
      out.members.push_back(
          {"outer:" + m.label, std::move(m.op), "outer system; " + m.provenance});
  }

  // Inner system of the collapsing sites at the u points, lifted through the
  // identity on the fixed sites.
  {
    const TensorSpace inner(tail_factors(space, sched.k));
    OperatorFamily fam = extract_generators(inner, SitePoints(sched.u));
    const LinOp id_head = LinOp::identity(static_cast<int>(head_dim(space, sched.k)));
    for (auto& m : fam.members)
      out.members.push_back({"inner:" + m.label,
                             sched.k == 0 ? std::move(m.op) : kron(id_head, m.op),
                             "inner system; " + m.provenance});
  }
  return projective_dedupe(out);
}

LimitSweepReport limit_sweep(const TensorSpace& space,
                             const DegenSchedule& sched, int trunc) {
  sched.validate(space.sites());
  require(!sched.s_values.empty(), "sweep needs at least one s value");

  const OperatorFamily predicted = predicted_limit_family(space, sched);
  std::vector<std::vector<double>> p_vecs;
  for (const auto& m : predicted.members) p_vecs.push_back(unit_vector(m.op));

  const int T = static_cast<int>(sched.s_values.size());
  struct PerS {
    OperatorFamily fam;
    std::vector<int> rep;
    Matching matching;                  // over survivors
    std::map<int, int> survivor_slot;   // member index -> survivor position
  };
  std::vector<PerS> per_s(T);
  parallel_for(static_cast<std::size_t>(T), [&](std::size_t t) {
    PerS& slot = per_s[t];
    slot.fam = extract_generators(
        space, SitePoints(sched.points_at(sched.s_values[t])), trunc);
    slot.rep = representatives(slot.fam);
    std::vector<std::vector<double>> q_vecs;
    std::vector<std::string> q_labels;
    for (std::size_t i = 0; i < slot.fam.members.size(); ++i) {
      if (slot.rep[i] != static_cast<int>(i)) continue;
      slot.survivor_slot[static_cast<int>(i)] =
          static_cast<int>(q_vecs.size());
      q_vecs.push_back(unit_vector(slot.fam.members[i].op));
      q_labels.push_back(slot.fam.members[i].label);
    }
    slot.matching = greedy_match(q_vecs, p_vecs, q_labels, predicted.labels(),
                                 "s = " + rat_str(sched.s_values[t]));
  });

  LimitSweepReport report;
  report.s_values = sched.s_values;
  for (const auto& slot : per_s)
    for (const auto& note : slot.matching.notes)
      report.ambiguities.push_back(note);

  // One trace per survivor of the first (largest) s; members collapsed at a
  // later s inherit their representative's distance there.
  const PerS& first = per_s.front();
  for (const auto& [idx, slot0] : first.survivor_slot) {
    MemberTrace trace;
    trace.label = first.fam.members[idx].label;
    for (int t = 0; t < T; ++t) {
      const PerS& cur = per_s[t];
      const int rep_idx = cur.rep[idx];
      const int q_pos = cur.survivor_slot.at(rep_idx);
      trace.dist.push_back(cur.matching.dist[q_pos]);
      if (t == T - 1) {
        const int p_idx = cur.matching.match[q_pos];
        trace.matched = p_idx >= 0 ? predicted.members[p_idx].label : "";
      }
    }
    trace.degenerate = std::all_of(trace.dist.begin(), trace.dist.end(),
                                   [](double d) { return d < 1e-14; });
    report.members.push_back(std::move(trace));
  }

  report.max_dist.assign(T, 0.0);
  for (const auto& trace : report.members) {
    if (trace.degenerate) continue;
    for (int t = 0; t < T; ++t)
      report.max_dist[t] = std::max(report.max_dist[t], trace.dist[t]);
  }

  const bool all_zero = std::all_of(report.max_dist.begin(),
                                    report.max_dist.end(),
                                    [](double d) { return d < 1e-14; });
  if (all_zero) {
    report.tail_monotone = true;
    report.slope = 0.0;
    report.converged = true;
    return report;
  }

  report.tail_monotone = true;
  for (int t = std::max(0, T - 3); t + 1 < T; ++t)
    if (!(report.max_dist[t] > report.max_dist[t + 1]))
      report.tail_monotone = false;

  // Least-squares slope of log10(max_dist) against log10(s).
  std::vector<double> xs, ys;
  for (int t = 0; t < T; ++t) {
    if (report.max_dist[t] <= 0.0) continue;
    xs.push_back(std::log10(rat_to_double(sched.s_values[t])));
    ys.push_back(std::log10(report.max_dist[t]));
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    report.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  report.converged = report.tail_monotone && report.slope >= 0.8;
  return report;
}

OperatorFamily bending_quadratic_family(const TensorSpace& space) {
  const int n = space.sites();
  require(n >= 2, "bending family needs at least two sites");
  OperatorFamily fam;
  fam.name = "bending quadratic family";
  for (int k = 0; k + 1 < n; ++k) {
    LinOp m = LinOp::zeros(space.dim());
    for (int j = k + 1; j < n; ++j) m = add(m, split_casimir(space, k, j));
    fam.members.push_back({"M" + std::to_string(k + 1), std::move(m),
                           "sum of split casimirs with all later sites"});
  }
  std::vector<LinOp> diag;
  for (int i = 0; i < space.n_gl(); ++i)
    for (int j = 0; j < space.n_gl(); ++j) diag.push_back(space.diagonal_gen(i, j));
  std::vector<LinOp> cas = gelfand_invariants(diag, space.n_gl(), 2);
  fam.members.push_back(
      {"C2[diag]", std::move(cas[1]), "quadratic Casimir of the diagonal action"});
  return fam;
}

OperatorFamily alim_generators(const TensorSpace& space, const Rat& z_a,
                               const Rat& z_b) {
  require(z_a != z_b, "the two extraction points must differ");
  const int n = space.sites();
  require(n >= 2, "bending generators need at least two sites");
  OperatorFamily out;
  out.name = "bending generators";
  for (int k = 1; k < n; ++k) {
    const TensorSpace two(
        {space.factor(k - 1), diag_composite(tail_factors(space, k))});
    OperatorFamily fam = extract_generators(two, SitePoints({z_a, z_b}));
    const long head = head_dim(space, k - 1);
    const LinOp id_head = LinOp::identity(static_cast<int>(head));
    for (auto& m : fam.members)
      out.members.push_back(
          {"A" + std::to_string(k) + ":" + m.label,
           head == 1 ? std::move(m.op) : kron(id_head, m.op),
           "two-point system at site " + std::to_string(k) +
               " against the glued rest; " + m.provenance});
  }
  return out;
}

const Rat& ClassicalPoint::entry(int site, int p, int q) const {
  return X.at(site).at(static_cast<std::size_t>(p) * n_gl + q);
}

Rat classical_bending(const ClassicalPoint& pt, int l, int k, int alpha) {
  check_bend_spec(pt, l, k, alpha);
  const std::vector<Mat> pw =
      pencil_power(point_matrix(pt, k), glued_tail(pt, k), pt.n_gl, l);
  return mat_trace(pw[alpha], pt.n_gl);
}

Rat poisson_bracket(const BendSpec& f, const BendSpec& g,
                    const ClassicalPoint& pt) {
  check_bend_spec(pt, f.l, f.k, f.alpha);
  check_bend_spec(pt, g.l, g.k, g.alpha);
  const int N = pt.n_gl;
  const std::vector<Mat> gf = bend_gradients(f, pt);
  const std::vector<Mat> gg = bend_gradients(g, pt);
  Rat total(0);
  for (int j = 1; j <= pt.sites(); ++j) {
    const Mat x = point_matrix(pt, j);
    const Mat fg = mat_mul(gf[j - 1], gg[j - 1], N);
    const Mat gfm = mat_mul(gg[j - 1], gf[j - 1], N);
    Mat comm = fg;
    for (std::size_t i = 0; i < comm.size(); ++i) comm[i] -= gfm[i];
    total += mat_trace(mat_mul(x, comm, N), N);
  }
  return total;
}

Rat symbol_split_casimir(const ClassicalPoint& pt, int i, int j) {
  require(i >= 1 && i <= pt.sites() && j >= 1 && j <= pt.sites(),
          "site index out of range");
  return mat_trace(
      mat_mul(point_matrix(pt, i), point_matrix(pt, j), pt.n_gl), pt.n_gl);
}

}  // namespace gaudin
