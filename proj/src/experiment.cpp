#include "gaudin/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gaudin/duality.hpp"
#include "gaudin/family.hpp"
#include "gaudin/gaudin_family.hpp"
#include "gaudin/limits.hpp"
#include "gaudin/parallel.hpp"
#include "gaudin/rational.hpp"
#include "gaudin/speclab.hpp"
#include "gaudin/symgroup.hpp"

namespace gaudin {
namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

// ---- config field access -------------------------------------------------

void require_keys(const Json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known |= it.key() == key;
    if (!known) bad("unknown field \"" + it.key() + "\" in " + where);
  }
}

const Json& get_field(const Json& obj, const char* key,
                      const std::string& where) {
  if (!obj.contains(key))
    bad(where + " needs field \"" + std::string(key) + "\"");
  return obj.at(key);
}

int get_int(const Json& obj, const char* key, const std::string& where) {
  const Json& v = get_field(obj, key, where);
  if (!v.is_number_integer())
    bad("field \"" + std::string(key) + "\" in " + where +
        " must be an integer");
  return v.get<int>();
}

Rat json_rat(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) {
    try {
      return rat_parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad(where + ": " + e.what());
    }
  }
  bad(where + " must be an integer or an exact \"p/q\" string");
}

Rat get_rat(const Json& obj, const char* key, const std::string& where) {
  return json_rat(get_field(obj, key, where),
                  where + " field \"" + std::string(key) + "\"");
}

std::vector<Rat> get_rat_list(const Json& obj, const char* key,
                              const std::string& where) {
  const Json& v = get_field(obj, key, where);
  const std::string ctx = where + " field \"" + std::string(key) + "\"";
  if (!v.is_array() || v.empty()) bad(ctx + " must be a non-empty array");
  std::vector<Rat> out;
  for (const Json& e : v) out.push_back(json_rat(e, ctx));
  return out;
}

std::vector<int> get_weights(const Json& obj, const char* key,
                             const std::string& where) {
  const Json& v = get_field(obj, key, where);
  const std::string ctx = where + " field \"" + std::string(key) + "\"";
  if (!v.is_array() || v.empty()) bad(ctx + " must be a non-empty array");
  std::vector<int> out;
  for (const Json& e : v) {
    if (!e.is_number_integer() || e.get<int>() < 1)
      bad(ctx + " must hold positive integers");
    out.push_back(e.get<int>());
  }
  return out;
}

void require_distinct_sites(const std::vector<Rat>& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (z[i] == z[j]) bad("sites not pairwise distinct");
}

// ---- serialization helpers ----------------------------------------------

std::string rat_json(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Json rat_json_list(const std::vector<Rat>& xs) {
  Json out = Json::array();
  for (const Rat& x : xs) out.push_back(rat_json(x));
  return out;
}

const char* verdict(bool pass, bool indeterminate) {
  if (indeterminate) return "indeterminate";
  return pass ? "pass" : "fail";
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TensorSpace weight_space(int N, const std::vector<int>& weights,
                         const std::string& where) {
  if (N < 1) bad(where + ": need N >= 1");
  std::vector<ModuleRep> factors;
  factors.reserve(weights.size());
  for (int w : weights) factors.push_back(symmetric_power(N, w));
  return TensorSpace(std::move(factors));
}

// One case's contribution: verdict entries, a table row, maybe a spectrum.
struct CaseOutput {
  Json verdicts = Json::object();
  Json table = Json::object();
  std::string csv;  // spectra body; empty when the case produces none
};

std::string spectra_csv(const std::vector<std::string>& labels,
                        const std::vector<JointTuple>& tuples) {
  std::string out =
      "tuple_index,member_label,eigenvalue_re,eigenvalue_im,multiplicity\n";
  for (std::size_t t = 0; t < tuples.size(); ++t)
    for (std::size_t f = 0; f < labels.size(); ++f) {
      out += std::to_string(t) + "," + labels[f] + ",";
      out += fmt_double(tuples[t].values[f].real()) + ",";
      out += fmt_double(tuples[t].values[f].imag()) + ",";
      out += std::to_string(tuples[t].multiplicity) + "\n";
    }
  return out;
}

// ---- commute-check -------------------------------------------------------

CaseOutput commute_case(const Json& c, const std::string& label,
                        const std::string& precision, int trunc) {
  require_keys(c, {"N", "weights", "z", "affine"}, label);
  const int N = get_int(c, "N", label);
  const std::vector<int> weights = get_weights(c, "weights", label);
  const std::vector<Rat> z = get_rat_list(c, "z", label);
  if (z.size() != weights.size())
    bad(label + ": z and weights must have matching length");
  require_distinct_sites(z);

  const TensorSpace space = weight_space(N, weights, label);
  const SitePoints pts(z);

  OperatorFamily joint = quadratic_family(space, pts);
  LinOp sum = LinOp::zeros(space.dim());
  for (const auto& m : joint.members) sum = add(sum, m.op);
  const bool sum_zero = sum.is_zero();

  const OperatorFamily gens = extract_generators(space, pts, trunc);
  for (const auto& m : gens.members) joint.members.push_back(m);

  CaseOutput out;
  out.table["N"] = N;
  out.table["weights"] = weights;
  out.table["z"] = rat_json_list(z);
  out.table["dim"] = space.dim();
  out.table["members"] = joint.size();
  out.table["sum_zero"] = sum_zero;

  CommuteReport rep;
  if (precision == "f64") {
    OperatorFamily floated;
    for (const auto& m : joint.members)
      floated.members.push_back({m.label, m.op.to_complex(), m.provenance});
    rep = pairwise_commute(floated);
    out.table["max_commutator_norm"] = rep.max_norm;
  } else {
    rep = pairwise_commute(joint);
    if (rep.all_commute)
      out.table["max_commutator_norm"] = rat_json(Rat(0));
    else
      out.table["max_commutator_norm"] = rep.max_norm;
  }
  out.table["pairs_checked"] = rep.pairs_checked;
  if (rep.first_offender)
    out.table["first_offender"] =
        Json::array({rep.first_offender->first, rep.first_offender->second});
  out.verdicts[label] = verdict(rep.all_commute && sum_zero, false);

  if (c.contains("affine")) {
    const Json& aff = c.at("affine");
    if (!aff.is_object()) bad(label + ": \"affine\" must be an object");
    require_keys(aff, {"scale", "shift"}, label + ".affine");
    const Rat scale = get_rat(aff, "scale", label + ".affine");
    const Rat shift = get_rat(aff, "shift", label + ".affine");
    if (scale == 0) bad(label + ".affine: scale must be nonzero");
    std::vector<Rat> moved;
    for (const Rat& p : z) moved.push_back(scale * p + shift);
    const OperatorFamily gens_moved =
        extract_generators(space, SitePoints(moved), trunc);
    // One direction per call: the comparison stops at its first failure.
    const bool fwd = family_spans_equal(gens, gens_moved).forward;
    const bool bwd = family_spans_equal(gens_moved, gens).forward;
    Json a;
    a["scale"] = rat_json(scale);
    a["shift"] = rat_json(shift);
    a["z_image"] = rat_json_list(moved);
    a["forward"] = fwd;
    a["backward"] = bwd;
    out.table["affine"] = a;
    out.verdicts[label + ".affine"] = verdict(fwd && bwd, false);
  }
  return out;
}

// ---- spectrum ------------------------------------------------------------

CaseOutput spectrum_case(const Json& c, const std::string& label,
                         unsigned case_seed, int trunc) {
  require_keys(c, {"N", "weights", "z", "trials"}, label);
  const int N = get_int(c, "N", label);
  const std::vector<int> weights = get_weights(c, "weights", label);
  const bool has_z = c.contains("z"), has_trials = c.contains("trials");
  if (has_z == has_trials)
    bad(label + ": give exactly one of \"z\" or \"trials\"");

  const TensorSpace space = weight_space(N, weights, label);
  const int sing_dim = static_cast<int>(space.singular_subspace().size());

  CaseOutput out;
  out.table["N"] = N;
  out.table["weights"] = weights;
  out.table["dim"] = space.dim();
  out.table["subspace_dim"] = sing_dim;
  out.table["seed"] = case_seed;

  if (has_trials) {
    const int trials = get_int(c, "trials", label);
    if (trials < 1) bad(label + ": trials must be >= 1");
    const GenericityReport rep = genericity_sample(N, weights, trials, case_seed);
    double min_gap = 0.0;
    bool seen = false;
    Json samples = Json::array();
    for (const auto& s : rep.samples) {
      Json row;
      row["z"] = rat_json_list(s.z);
      row["simple"] = s.simple;
      row["indeterminate"] = s.indeterminate;
      row["min_gap"] = s.min_gap;
      samples.push_back(row);
      if (s.simple && (!seen || s.min_gap < min_gap)) min_gap = s.min_gap;
      seen |= s.simple;
    }
    out.table["trials"] = trials;
    out.table["simple_count"] = rep.simple_count;
    out.table["non_simple_count"] = rep.non_simple_count;
    out.table["indeterminate_count"] = rep.indeterminate_count;
    out.table["min_gap"] = min_gap;
    out.table["samples"] = samples;
    out.verdicts[label] = verdict(rep.simple_count == trials,
                                  rep.non_simple_count == 0 &&
                                      rep.indeterminate_count > 0);
    return out;
  }

  const std::vector<Rat> z = get_rat_list(c, "z", label);
  if (z.size() != weights.size())
    bad(label + ": z and weights must have matching length");
  require_distinct_sites(z);
  const SitePoints pts(z);
  OperatorFamily fam = quadratic_family(space, pts);
  OperatorFamily gens = extract_generators(space, pts, trunc);
  for (auto& m : gens.members) fam.members.push_back(std::move(m));
  const OperatorFamily restricted =
      restrict_family(fam, space.singular_subspace());
  const SpectrumReport spec = joint_spectrum(restricted, case_seed);

  out.table["z"] = rat_json_list(z);
  out.table["labels"] = spec.labels;
  out.table["simple"] = spec.simple;
  out.table["indeterminate"] = spec.indeterminate;
  out.table["min_gap"] = spec.min_gap;
  out.table["notes"] = spec.notes;
  Json tuples = Json::array();
  for (const auto& t : spec.tuples) {
    Json row;
    Json values = Json::array();
    for (const Cplx& v : t.values)
      values.push_back(Json::array({v.real(), v.imag()}));
    row["values"] = values;
    row["multiplicity"] = t.multiplicity;
    tuples.push_back(row);
  }
  out.table["tuples"] = tuples;
  out.verdicts[label] = verdict(spec.simple, spec.indeterminate);
  out.csv = spectra_csv(spec.labels, spec.tuples);
  return out;
}

// ---- schur-weyl ----------------------------------------------------------

CaseOutput schur_weyl_case(const Json& c, const std::string& label) {
  require_keys(c, {"N", "n"}, label);
  const int N = get_int(c, "N", label);
  const int n = get_int(c, "n", label);
  if (n < 2) bad(label + ": need n >= 2 tensor slots");
  if (N < n) bad(label + ": need N >= n so every partition of n appears");

  std::vector<ModuleRep> factors(n, standard_module(N));
  const TensorSpace space(std::move(factors));
  const JMSpectrumReport rep = jm_spectrum_check(space);

  // Collapse the multiplicity-expanded tuple list back to distinct rows.
  std::vector<std::pair<std::vector<long>, int>> grouped;
  for (const auto& t : rep.observed) {
    if (!grouped.empty() && grouped.back().first == t)
      ++grouped.back().second;
    else
      grouped.push_back({t, 1});
  }

  CaseOutput out;
  out.table["N"] = N;
  out.table["n"] = n;
  out.table["subspace_dim"] = rep.subspace_dim;
  out.table["all_multiplicity_one"] = rep.all_multiplicity_one;
  out.table["tuple_count"] = static_cast<int>(grouped.size());
  out.table["expected_count"] = static_cast<int>(rep.expected.size());
  out.table["notes"] = rep.notes;
  Json tuples = Json::array();
  for (const auto& [contents, mult] : grouped) {
    Json row;
    row["contents"] = contents;
    row["multiplicity"] = mult;
    tuples.push_back(row);
  }
  out.table["tuples"] = tuples;
  out.verdicts[label] = verdict(rep.pass, rep.indeterminate);

  out.csv =
      "tuple_index,member_label,eigenvalue_re,eigenvalue_im,multiplicity\n";
  for (std::size_t t = 0; t < grouped.size(); ++t)
    for (std::size_t f = 0; f < grouped[t].first.size(); ++f) {
      out.csv += std::to_string(t) + ",X" + std::to_string(f + 2) + ",";
      out.csv += fmt_double(static_cast<double>(grouped[t].first[f])) + ",0,";
      out.csv += std::to_string(grouped[t].second) + "\n";
    }
  return out;
}

// ---- limit-sweep ---------------------------------------------------------

CaseOutput limit_sweep_case(const Json& c, const std::string& label,
                            int trunc) {
  require_keys(c, {"N", "weights", "k", "z_fixed", "z_center", "u", "s_values"},
               label);
  const int N = get_int(c, "N", label);
  const std::vector<int> weights = get_weights(c, "weights", label);
  const TensorSpace space = weight_space(N, weights, label);

  DegenSchedule sched;
  sched.k = get_int(c, "k", label);
  sched.z_fixed = get_rat_list(c, "z_fixed", label);
  sched.z_center = get_rat(c, "z_center", label);
  sched.u = get_rat_list(c, "u", label);
  sched.s_values = get_rat_list(c, "s_values", label);
  try {
    sched.validate(space.sites());
  } catch (const std::invalid_argument& e) {
    bad(label + ": " + e.what());
  }

  const LimitSweepReport rep = limit_sweep(space, sched, trunc);
  const OperatorFamily pred = predicted_limit_family(space, sched);
  const CommuteReport pc = pairwise_commute(pred);

  CaseOutput out;
  out.table["N"] = N;
  out.table["weights"] = weights;
  out.table["k"] = sched.k;
  out.table["z_fixed"] = rat_json_list(sched.z_fixed);
  out.table["z_center"] = rat_json(sched.z_center);
  out.table["u"] = rat_json_list(sched.u);
  out.table["s_values"] = rat_json_list(rep.s_values);
  out.table["max_dist"] = rep.max_dist;
  out.table["slope"] = rep.slope;
  out.table["tail_monotone"] = rep.tail_monotone;
  out.table["converged"] = rep.converged;
  out.table["ambiguities"] = rep.ambiguities;
  Json members = Json::array();
  for (const auto& m : rep.members) {
    Json row;
    row["label"] = m.label;
    row["matched"] = m.matched;
    row["degenerate"] = m.degenerate;
    row["dist"] = m.dist;
    members.push_back(row);
  }
  out.table["members"] = members;
  Json predicted;
  predicted["members"] = pred.size();
  predicted["all_commute"] = pc.all_commute;
  if (pc.all_commute)
    predicted["max_commutator_norm"] = rat_json(Rat(0));
  else
    predicted["max_commutator_norm"] = pc.max_norm;
  out.table["predicted"] = predicted;

  out.verdicts[label] =
      verdict(rep.converged && rep.ambiguities.empty(),
              rep.converged && !rep.ambiguities.empty());
  out.verdicts[label + ".predicted"] = verdict(pc.all_commute, false);
  return out;
}

// ---- duality-check / gt-match --------------------------------------------

PolySpace poly_space(const Json& c, const std::string& label, int* M_out) {
  const int N = get_int(c, "N", label);
  const int M = get_int(c, "M", label);
  const int d = get_int(c, "d", label);
  if (N < 1 || M < 1 || d < 0)
    bad(label + ": need N >= 1, M >= 1, d >= 0");
  if (M_out) *M_out = M;
  return PolySpace(N, M, d);
}

CaseOutput duality_case(const Json& c, const std::string& label) {
  require_keys(c, {"N", "M", "d", "Z"}, label);
  int M = 0;
  const PolySpace p = poly_space(c, label, &M);
  const std::vector<Rat> Z = get_rat_list(c, "Z", label);
  if (static_cast<int>(Z.size()) != M)
    bad(label + ": Z must list one point per column");
  require_distinct_sites(Z);

  const DualityReport rep = duality_check(p, SitePoints(Z));
  CaseOutput out;
  out.table["N"] = p.rows();
  out.table["M"] = M;
  out.table["d"] = p.degree();
  out.table["dim"] = p.dim();
  out.table["Z"] = rat_json_list(Z);
  out.table["forward"] = rep.forward;
  out.table["backward"] = rep.backward;
  out.table["notes"] = rep.notes;
  out.verdicts[label] = verdict(rep.pass(), false);
  return out;
}

CaseOutput gt_match_case(const Json& c, const std::string& label) {
  require_keys(c, {"N", "M", "d"}, label);
  int M = 0;
  const PolySpace p = poly_space(c, label, &M);
  const GtMatchReport rep = gt_match_check(p);

  CaseOutput out;
  out.table["N"] = p.rows();
  out.table["M"] = M;
  out.table["d"] = p.degree();
  out.table["dim"] = p.dim();
  out.table["blocks_a"] = rep.blocks_a;
  out.table["blocks_b"] = rep.blocks_b;
  out.table["max_projector_dist"] = rep.max_projector_dist;
  out.table["notes"] = rep.notes;
  out.verdicts[label] = verdict(rep.match, rep.indeterminate);
  return out;
}

// ---- bending-classical ---------------------------------------------------

std::string bend_label(const BendSpec& s) {
  return "B(" + std::to_string(s.l) + "," + std::to_string(s.k) + "," +
         std::to_string(s.alpha) + ")";
}

// Partial derivative of the (l, k, alpha) value with respect to entry (p, q)
// of site j, by Richardson-extrapolated central differences of the exact
// values: (4 D(h/2) - D(h)) / 3 is exact for polynomials of degree <= 4.
Rat fd_partial(const ClassicalPoint& pt, const BendSpec& s, int j, int p,
               int q) {
  const int N = pt.n_gl;
  auto value_at = [&](const Rat& step) -> Rat {
    ClassicalPoint moved = pt;
    moved.X[j][p * N + q] += step;
    return classical_bending(moved, s.l, s.k, s.alpha);
  };
  // Explicit Rat return: a deduced type would be a GMP expression template
  // referencing temporaries that die at the lambda's return.
  auto central = [&](const Rat& h) -> Rat {
    return (value_at(h) - value_at(Rat(-h))) / (Rat(2) * h);
  };
  const Rat h = rat_of(1, 10000);
  return (Rat(4) * central(h / 2) - central(h)) / Rat(3);
}

// Bracket value rebuilt from difference-quotient gradients:
// sum_j Tr(X_j [G_j f, G_j g]) with (G_j f)_{qp} = df/d(X_j)_{pq}.
Rat fd_bracket(const ClassicalPoint& pt, const BendSpec& f,
               const BendSpec& g) {
  const int N = pt.n_gl;
  Rat total = 0;
  for (int j = 0; j < pt.sites(); ++j) {
    std::vector<Rat> gf(N * N), gg(N * N);
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q) {
        gf[q * N + p] = fd_partial(pt, f, j, p, q);
        gg[q * N + p] = fd_partial(pt, g, j, p, q);
      }
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        Rat c_ba = 0;
        for (int c = 0; c < N; ++c)
          c_ba += gf[b * N + c] * gg[c * N + a] -
                  gg[b * N + c] * gf[c * N + a];
        total += pt.entry(j, a, b) * c_ba;
      }
  }
  return total;
}

CaseOutput bending_case(const Json& c, const std::string& label,
                        unsigned case_seed) {
  require_keys(c, {"N", "n", "l_max", "points", "fd_checks"}, label);
  const int N = get_int(c, "N", label);
  const int n = get_int(c, "n", label);
  const int l_max = get_int(c, "l_max", label);
  const int n_points = get_int(c, "points", label);
  const int fd_checks = get_int(c, "fd_checks", label);
  if (N < 1 || n < 1) bad(label + ": need N >= 1 and n >= 1");
  if (l_max < 1) bad(label + ": need l_max >= 1");
  if (n_points < 1) bad(label + ": need at least one sample point");
  if (fd_checks < 0) bad(label + ": fd_checks must be >= 0");

  std::vector<BendSpec> specs;
  for (int l = 1; l <= l_max; ++l)
    for (int k = 1; k <= n; ++k)
      for (int alpha = 0; alpha <= l; ++alpha)
        specs.push_back(BendSpec{l, k, alpha});
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j)
      pairs.push_back({static_cast<int>(i), static_cast<int>(j)});

  const long combos = static_cast<long>(pairs.size()) * n_points;
  if (fd_checks > combos)
    bad(label + ": fd_checks exceeds the available (pair, point) evaluations");

  std::mt19937 rng(case_seed);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 20);
  std::vector<ClassicalPoint> points(n_points);
  for (auto& pt : points) {
    pt.n_gl = N;
    pt.X.assign(n, std::vector<Rat>(N * N));
    for (auto& site : pt.X)
      for (Rat& entry : site) entry = rat_of(num(rng), den(rng));
  }

  std::vector<Rat> vals(pairs.size() * n_points);
  parallel_for(vals.size(), [&](std::size_t idx) {
    const auto& [fi, gi] = pairs[idx / n_points];
    vals[idx] = poisson_bracket(specs[fi], specs[gi],
                                points[idx % n_points]);
  });
  bool all_zero = true;
  Rat max_abs = 0;
  for (const Rat& v : vals) {
    all_zero &= v == 0;
    if (abs(v) > max_abs) max_abs = abs(v);
  }

  CaseOutput out;
  out.table["N"] = N;
  out.table["n"] = n;
  out.table["l_max"] = l_max;
  out.table["specs"] = static_cast<int>(specs.size());
  out.table["pairs"] = static_cast<int>(pairs.size());
  out.table["seed"] = case_seed;
  Json pts_json = Json::array();
  for (const auto& pt : points) {
    Json sites = Json::array();
    for (const auto& site : pt.X) sites.push_back(rat_json_list(site));
    pts_json.push_back(sites);
  }
  out.table["points"] = pts_json;
  out.table["all_zero"] = all_zero;
  out.table["max_abs_bracket"] = rat_json(max_abs);
  out.verdicts[label] = verdict(all_zero, false);

  if (fd_checks > 0) {
    std::uniform_int_distribution<std::size_t> pick_pair(0, pairs.size() - 1);
    std::uniform_int_distribution<int> pick_point(0, n_points - 1);
    std::vector<std::pair<std::size_t, int>> picks;
    while (static_cast<int>(picks.size()) < fd_checks) {
      const std::pair<std::size_t, int> pick{pick_pair(rng), pick_point(rng)};
      if (std::find(picks.begin(), picks.end(), pick) == picks.end())
        picks.push_back(pick);
    }
    double max_dev = 0.0;
    Json checks = Json::array();
    for (const auto& [pair_idx, point_idx] : picks) {
      const auto& [fi, gi] = pairs[pair_idx];
      const Rat exact = vals[pair_idx * n_points + point_idx];
      const Rat fd = fd_bracket(points[point_idx], specs[fi], specs[gi]);
      const double dev = std::abs(rat_to_double(fd - exact));
      max_dev = std::max(max_dev, dev);
      Json row;
      row["pair"] = Json::array({bend_label(specs[fi]), bend_label(specs[gi])});
      row["point"] = point_idx;
      row["exact"] = rat_json(exact);
      row["fd"] = rat_json(fd);
      row["deviation"] = dev;
      checks.push_back(row);
    }
    Json fd_table;
    fd_table["checks"] = checks;
    fd_table["max_deviation"] = max_dev;
    out.table["fd"] = fd_table;
    out.verdicts[label + ".fd"] = verdict(max_dev <= 1e-6, false);
  }
  return out;
}

// ---- dispatch ------------------------------------------------------------

int exit_from_verdicts(const Json& verdicts) {
  bool any_fail = false, any_indet = false;
  for (const auto& [key, v] : verdicts.items()) {
    (void)key;
    any_fail |= v == "fail";
    any_indet |= v == "indeterminate";
  }
  if (any_fail) return 2;
  return any_indet ? 3 : 0;
}

bool json_close(const Json& a, const Json& b, double tol,
                const std::string& path, std::string* where) {
  const auto mismatch = [&](const std::string& detail) {
    if (where) *where = path + ": " + detail;
    return false;
  };
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({1.0, std::abs(x), std::abs(y)});
    if (std::abs(x - y) <= tol * scale) return true;
    return mismatch(a.dump() + " vs " + b.dump());
  }
  if (a.type() != b.type()) return mismatch("value types differ");
  if (a.is_array()) {
    if (a.size() != b.size()) return mismatch("array sizes differ");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_close(a[i], b[i], tol, path + "[" + std::to_string(i) + "]",
                      where))
        return false;
    return true;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()))
        return mismatch("key \"" + it.key() + "\" missing on rerun");
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (!a.contains(it.key()))
        return mismatch("rerun added key \"" + it.key() + "\"");
      if (!json_close(a.at(it.key()), it.value(), tol,
                      path + "." + it.key(), where))
        return false;
    }
    return true;
  }
  if (a != b) return mismatch(a.dump() + " vs " + b.dump());
  return true;
}

}  // namespace

RunOutcome run_experiment(const Json& config, const RunOptions& opts) {
  RunOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto ms_since = [](std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };
  try {
    if (!config.is_object()) bad("config must be a JSON object");
    require_keys(config,
                 {"schema", "kind", "seed", "precision", "threads", "trunc",
                  "cases"},
                 "config");
    if (get_int(config, "schema", "config") != 1)
      bad("unsupported config schema (expected \"schema\": 1)");
    const Json& kind_field = get_field(config, "kind", "config");
    if (!kind_field.is_string()) bad("field \"kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();
    const std::vector<std::string> kinds = {
        "commute-check", "spectrum",         "limit-sweep", "duality-check",
        "gt-match",      "bending-classical", "schur-weyl"};
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
      bad("unknown kind \"" + kind + "\"");

    unsigned seed = 20240911u;
    if (config.contains("seed")) {
      const Json& s = config.at("seed");
      if (!s.is_number_integer() || s.get<long long>() < 0 ||
          s.get<long long>() > 0xFFFFFFFFll)
        bad("field \"seed\" must be an integer in [0, 2^32)");
      seed = static_cast<unsigned>(s.get<long long>());
    }
    std::string precision = "exact";
    if (config.contains("precision")) {
      const Json& p = config.at("precision");
      if (!p.is_string()) bad("field \"precision\" must be a string");
      precision = p.get<std::string>();
    }
    int threads = 0;
    if (config.contains("threads")) {
      threads = get_int(config, "threads", "config");
      if (threads < 0) bad("field \"threads\" must be >= 0");
    }
    int trunc = -1;
    if (config.contains("trunc")) trunc = get_int(config, "trunc", "config");

    Json overrides = Json::object();
    if (opts.seed) {
      seed = *opts.seed;
      overrides["seed"] = *opts.seed;
    }
    if (opts.threads) {
      if (*opts.threads < 0) bad("--threads must be >= 0");
      threads = *opts.threads;
      overrides["threads"] = *opts.threads;
    }
    if (opts.precision) {
      precision = *opts.precision;
      overrides["precision"] = *opts.precision;
    }
    if (opts.trunc) {
      trunc = *opts.trunc;
      overrides["trunc"] = *opts.trunc;
    }
    if (precision != "exact" && precision != "f64")
      bad("precision must be \"exact\" or \"f64\"");
    if (precision == "f64" && kind != "commute-check")
      bad("precision \"f64\" applies to commute-check only; " + kind +
          " runs exact");

    const Json& cases = get_field(config, "cases", "config");
    if (!cases.is_array() || cases.empty())
      bad("field \"cases\" must be a non-empty array");

    if (threads > 0) set_default_threads(threads);

    Json verdicts = Json::object();
    Json rows = Json::array();
    Json timings = Json::object();
    std::vector<std::pair<int, std::string>> spectra;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const std::string label = "case" + std::to_string(i + 1);
      if (!cases[i].is_object()) bad(label + " must be a JSON object");
      const unsigned case_seed = seed + static_cast<unsigned>(i);
      const auto tc = std::chrono::steady_clock::now();
      CaseOutput co;
      if (kind == "commute-check")
        co = commute_case(cases[i], label, precision, trunc);
      else if (kind == "spectrum")
        co = spectrum_case(cases[i], label, case_seed, trunc);
      else if (kind == "schur-weyl")
        co = schur_weyl_case(cases[i], label);
      else if (kind == "limit-sweep")
        co = limit_sweep_case(cases[i], label, trunc);
      else if (kind == "duality-check")
        co = duality_case(cases[i], label);
      else if (kind == "gt-match")
        co = gt_match_case(cases[i], label);
      else
        co = bending_case(cases[i], label, case_seed);
      timings[label] = ms_since(tc);
      co.table["label"] = label;
      rows.push_back(std::move(co.table));
      for (const auto& [key, v] : co.verdicts.items()) verdicts[key] = v;
      if (!co.csv.empty())
        spectra.push_back({static_cast<int>(i + 1), std::move(co.csv)});
    }

    out.report["tool"] = kToolName;
    out.report["version"] = kToolVersion;
    out.report["kind"] = kind;
    out.report["seed"] = seed;
    out.report["precision"] = precision;
    out.report["threads"] = threads;
    out.report["trunc"] = trunc;
    out.report["config"] = config;
    out.report["overrides"] = overrides;
    out.report["verdicts"] = verdicts;
    out.report["tables"] = Json{{"cases", rows}};
    timings["total"] = ms_since(t0);
    out.report["timings_ms"] = timings;
    if (spectra.size() == 1)
      out.csv_files.push_back({"spectra.csv", std::move(spectra[0].second)});
    else
      for (auto& [num, body] : spectra)
        out.csv_files.push_back(
            {"spectra_case" + std::to_string(num) + ".csv", std::move(body)});
    out.exit_code = exit_from_verdicts(verdicts);
  } catch (const ConfigError& e) {
    out.exit_code = 1;
    out.report = Json{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"error", e.what()},
                      {"config", config}};
    out.csv_files.clear();
  } catch (const std::invalid_argument& e) {
    out.exit_code = 1;
    out.report = Json{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"error", e.what()},
                      {"config", config}};
    out.csv_files.clear();
  }
  return out;
}

int replay_report(const Json& report, std::string* message) {
  const auto note = [&](const std::string& m) {
    if (message) *message = m;
  };
  if (!report.is_object()) {
    note("report must be a JSON object");
    return 1;
  }
  for (const char* key : {"version", "config", "verdicts", "tables"})
    if (!report.contains(key)) {
      note("report lacks \"" + std::string(key) + "\"");
      return 1;
    }
  if (!report.at("version").is_string() ||
      report.at("version").get<std::string>() != kToolVersion) {
    note("report version " + report.at("version").dump() +
         " does not match tool version " + kToolVersion);
    return 2;
  }

  RunOptions opts;
  if (report.contains("overrides")) {
    const Json& ov = report.at("overrides");
    if (!ov.is_object()) {
      note("\"overrides\" must be an object");
      return 1;
    }
    try {
      if (ov.contains("seed"))
        opts.seed = static_cast<unsigned>(ov.at("seed").get<long long>());
      if (ov.contains("threads")) opts.threads = ov.at("threads").get<int>();
      if (ov.contains("precision"))
        opts.precision = ov.at("precision").get<std::string>();
      if (ov.contains("trunc")) opts.trunc = ov.at("trunc").get<int>();
    } catch (const Json::exception& e) {
      note(std::string("bad overrides: ") + e.what());
      return 1;
    }
  }

  const RunOutcome rerun = run_experiment(report.at("config"), opts);
  if (rerun.exit_code == 1) {
    note("config echo does not validate: " +
         rerun.report.value("error", std::string("unknown error")));
    return 1;
  }
  if (rerun.report.at("verdicts") != report.at("verdicts")) {
    note("verdicts differ: recorded " + report.at("verdicts").dump() +
         ", rerun " + rerun.report.at("verdicts").dump());
    return 2;
  }
  std::string where;
  if (!json_close(report.at("tables"), rerun.report.at("tables"), 1e-12,
                  "tables", &where)) {
    note("tables differ at " + where);
    return 2;
  }
  note("replay matches");
  return 0;
}

}  // namespace gaudin
