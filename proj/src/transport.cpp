#include "lot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "lot/detail/transport_simplex.hpp"
#include "lot/errors.hpp"
#include "lot/rng.hpp"

namespace lot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMassEps = 1e-14;

}  // namespace

std::vector<std::tuple<int, int, double>> Coupling::entries(double eps) const {
  std::vector<std::tuple<int, int, double>> out;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double m = pi[r * cols.size() + c];
      if (m > eps) out.emplace_back(rows[r], cols[c], m);
    }
  return out;
}

std::vector<double> Coupling::row_sums() const {
  std::vector<double> out(rows.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out[r] += pi[r * cols.size() + c];
  return out;
}

std::vector<double> Coupling::col_sums() const {
  std::vector<double> out(cols.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out[c] += pi[r * cols.size() + c];
  return out;
}

namespace {

struct SupportProblem {
  std::vector<int> rows, cols;
  std::vector<double> supply, demand;
  std::vector<double> cost;  // ell^q, -inf forbidden
  double cost_scale = 1.0;
};

SupportProblem build_problem(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             double q) {
  if (&mu.space() != &nu.space())
    throw MarginalMismatchError("solve_lq: measures live on different spaces");
  if (!(q > 0.0 && q < 1.0)) throw Error("solve_lq: q must be in (0,1)");

  SupportProblem p;
  p.rows = mu.support();
  p.cols = nu.support();
  p.supply.reserve(p.rows.size());
  p.demand.reserve(p.cols.size());
  for (int r : p.rows) p.supply.push_back(mu.weight(r));
  for (int c : p.cols) p.demand.push_back(nu.weight(c));

  p.cost.resize(p.rows.size() * p.cols.size());
  double scale = 0.0;
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    for (std::size_t c = 0; c < p.cols.size(); ++c) {
      const double v = mu.space().ell(p.rows[r], p.cols[c]).pow(q).value();
      p.cost[r * p.cols.size() + c] = v;
      if (v != kNegInf) scale = std::max(scale, std::abs(v));
    }
  p.cost_scale = std::max(1.0, scale);
  return p;
}

LqResult solve_on_costs(const SupportProblem& p, const std::vector<double>& solve_cost,
                        double q) {
  auto sol = detail::solve_transport_max(
      static_cast<int>(p.rows.size()), static_cast<int>(p.cols.size()), p.supply,
      p.demand, solve_cost, 1e-10 * p.cost_scale);

  Coupling cp;
  cp.rows = p.rows;
  cp.cols = p.cols;
  cp.pi = std::move(sol.flow);
  cp.cost = p.cost;
  cp.q = q;
  cp.feasible = sol.feasible;

  // Objective under the original costs and TimeValue absorption.
  double obj = 0.0;
  for (std::size_t i = 0; i < cp.pi.size(); ++i)
    if (cp.pi[i] > 0.0) obj += cp.pi[i] * p.cost[i];
  cp.objective = TimeValue::finite(std::max(0.0, obj));

  LqResult out;
  if (!sol.feasible) {
    out.lq = TimeValue::unrelated();
    out.coupling = std::move(cp);
    return out;
  }

  cp.certificate.u = std::move(sol.u);
  cp.certificate.v = std::move(sol.v);
  if (sol.duals_valid) {
    double feas = 0.0;
    double slack = 0.0;
    for (std::size_t r = 0; r < cp.rows.size(); ++r)
      for (std::size_t c = 0; c < cp.cols.size(); ++c) {
        const double cost = p.cost[r * cp.cols.size() + c];
        if (cost == kNegInf) continue;
        const double rc = cost - cp.certificate.u[r] - cp.certificate.v[c];
        feas = std::max(feas, rc);
        if (cp.pi[r * cp.cols.size() + c] > kMassEps)
          slack = std::max(slack, std::abs(rc));
      }
    cp.certificate.feasibility_residual = std::max(0.0, feas);
    cp.certificate.slackness_residual = slack;
    cp.certificate.valid = feas < 1e-8 && slack < 1e-8;
  }

  out.lq = cp.objective.pow(1.0 / q);
  out.coupling = std::move(cp);
  return out;
}

}  // namespace

LqResult solve_lq(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double q) {
  const SupportProblem p = build_problem(mu, nu, q);
  return solve_on_costs(p, p.cost, q);
}

namespace {

double path_cost(const FiniteCausalSpace& space,
                 std::span<const std::pair<int, int>> pairs, std::span<const int> subset,
                 std::span<const int> sigma, double q) {
  TimeValue total = TimeValue::finite(0.0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const int a = pairs[static_cast<std::size_t>(subset[i])].first;
    const int b = pairs[static_cast<std::size_t>(subset[static_cast<std::size_t>(
                            sigma[i])])].second;
    total = total + space.ell(a, b).pow(q);
  }
  return total.value();
}

}  // namespace

CycMonoResult is_cyclically_monotone(const FiniteCausalSpace& space,
                                     std::span<const std::pair<int, int>> pairs,
                                     double q, const CycMonoMode& mode) {
  CycMonoResult out;
  const int n = static_cast<int>(pairs.size());
  if (n <= 1) return out;

  double scale = 1.0;
  for (const auto& p : pairs)
    for (const auto& r : pairs) {
      const TimeValue v = space.ell(p.first, r.second);
      if (v.related()) scale = std::max(scale, v.pow(q).value());
    }
  const double tol = 1e-9 * scale;

  const auto check = [&](std::span<const int> subset, std::span<const int> sigma) {
    std::vector<int> identity(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) identity[i] = static_cast<int>(i);
    const double base = path_cost(space, pairs, subset, identity, q);
    const double permuted = path_cost(space, pairs, subset, sigma, q);
    if (permuted > base + tol) {
      out.monotone = false;
      out.witness_subset.assign(subset.begin(), subset.end());
      out.witness_sigma.assign(sigma.begin(), sigma.end());
      out.witness_gap = permuted - base;
      return false;
    }
    return true;
  };

  if (mode.exhaustive) {
    if (n > 8)
      throw SizeGuardError("is_cyclically_monotone: exhaustive mode limited to 8 pairs");
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) < 2) continue;
      std::vector<int> subset;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) subset.push_back(i);
      std::vector<int> sigma(subset.size());
      for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = static_cast<int>(i);
      while (std::next_permutation(sigma.begin(), sigma.end()))
        if (!check(subset, sigma)) return out;
    }
    return out;
  }

  Rng rng(mode.seed);
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int s = 0; s < mode.samples; ++s) {
    const int size = static_cast<int>(rng.uniform_int(2, std::min(n, 10)));
    rng.shuffle(all);
    std::vector<int> subset(all.begin(), all.begin() + size);
    std::sort(subset.begin(), subset.end());
    std::vector<int> sigma(subset.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = static_cast<int>(i);
    rng.shuffle(sigma);
    bool identity = true;
    for (std::size_t i = 0; i < sigma.size(); ++i) identity = identity && sigma[i] == static_cast<int>(i);
    if (identity) continue;
    if (!check(subset, sigma)) return out;
  }
  return out;
}

const char* to_string(ChronologyClass c) {
  switch (c) {
    case ChronologyClass::Unrelated: return "Unrelated";
    case ChronologyClass::Causal: return "Causal";
    case ChronologyClass::QTimelike: return "QTimelike";
    case ChronologyClass::StrictlyQTimelike: return "StrictlyQTimelike";
    case ChronologyClass::TotallyTimelike: return "TotallyTimelike";
  }
  return "?";
}

namespace {

bool timelike_vertex(const FiniteCausalSpace& space, const Coupling& cp) {
  for (const auto& [a, b, m] : cp.entries(kMassEps))
    if (!space.ell(a, b).chronological()) return false;
  return true;
}

}  // namespace

ChronologyClass classify_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double q, int n_perturb, std::uint64_t seed) {
  const SupportProblem p = build_problem(mu, nu, q);
  const LqResult base = solve_on_costs(p, p.cost, q);
  if (!base.coupling.feasible) return ChronologyClass::Unrelated;

  bool totally = true;
  for (int r : p.rows) {
    for (int c : p.cols)
      if (!mu.space().ell(r, c).chronological()) {
        totally = false;
        break;
      }
    if (!totally) break;
  }
  if (totally) return ChronologyClass::TotallyTimelike;

  const bool primary_tl = timelike_vertex(mu.space(), base.coupling);
  bool all_tl = primary_tl;
  bool any_optimal_tl = primary_tl;
  const double eps_mag = 1e-7 * p.cost_scale;
  const double base_obj = base.coupling.objective.value();

  Rng rng(seed);
  const std::size_t arcs = p.cost.size();
  for (int k = 0; k < n_perturb; ++k) {
    std::vector<double> perturbed = p.cost;
    for (std::size_t i = 0; i < arcs; ++i) {
      if (perturbed[i] == kNegInf) continue;
      // Draw 0: graded deterministic perturbation; the rest random draws.
      const double e = k == 0 ? static_cast<double>(i + 1) / static_cast<double>(arcs)
                              : rng.uniform01();
      perturbed[i] += eps_mag * e;
    }
    const LqResult pert = solve_on_costs(p, perturbed, q);
    const bool tl = timelike_vertex(mu.space(), pert.coupling);
    all_tl = all_tl && tl;
    // Original objective of the perturbed vertex; a perturbed optimum lies
    // within the perturbation budget of the true optimum.
    double obj = 0.0;
    for (std::size_t i = 0; i < arcs; ++i)
      if (pert.coupling.pi[i] > 0.0) obj += pert.coupling.pi[i] * p.cost[i];
    if (tl && obj >= base_obj - 3.0 * eps_mag) any_optimal_tl = true;
  }

  if (all_tl) return ChronologyClass::StrictlyQTimelike;
  if (any_optimal_tl) return ChronologyClass::QTimelike;
  return ChronologyClass::Causal;
}

Coupling restrict_coupling(const Coupling& coupling, std::span<const double> f) {
  if (f.size() != coupling.pi.size())
    throw Error("restrict_coupling: weight vector must align with the coupling matrix");
  double z = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0.0)) throw Error("restrict_coupling: weights must be >= 0");
    z += f[i] * coupling.pi[i];
  }
  if (!(z > 0.0)) throw Error("restrict_coupling: zero total mass");

  Coupling out = coupling;
  double obj = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.pi[i] = f[i] * coupling.pi[i] / z;
    if (out.pi[i] > 0.0) obj += out.pi[i] * out.cost[i];
  }
  out.objective = TimeValue::finite(std::max(0.0, obj));

  // The parent's potentials remain dual-feasible and the support only
  // shrinks, so the certificate carries over; recompute the slack residual.
  if (!out.certificate.u.empty()) {
    double slack = 0.0;
    for (std::size_t r = 0; r < out.rows.size(); ++r)
      for (std::size_t c = 0; c < out.cols.size(); ++c) {
        const std::size_t i = r * out.cols.size() + c;
        if (out.pi[i] <= kMassEps) continue;
        slack = std::max(slack,
                         std::abs(out.cost[i] - out.certificate.u[r] - out.certificate.v[c]));
      }
    out.certificate.slackness_residual = slack;
    out.certificate.valid = out.certificate.valid && slack < 1e-8;
  }
  return out;
}

DiscreteMeasure displacement_interpolate(const TransportPlan& plan, double t) {
  if (plan.grid == nullptr)
    throw Error("displacement_interpolate: plan has no grid geometry");
  if (!plan.coupling.feasible)
    throw Error("displacement_interpolate: cannot interpolate a partial witness coupling");
  if (!(t >= 0.0 && t <= 1.0)) throw Error("displacement_interpolate: t must be in [0,1]");
  const FiniteCausalSpace& space = plan.grid->space();
  std::vector<double> weights(static_cast<std::size_t>(space.size()), 0.0);
  for (const auto& [a, b, mass] : plan.coupling.entries(0.0)) {
    const MinkowskiPoint ga = plan.grid->point(a);
    const MinkowskiPoint gb = plan.grid->point(b);
    const auto cell = plan.grid->cell_index(geodesic_point(ga, gb, t));
    if (!cell) throw OutOfDomainError("displacement_interpolate: point left the grid box");
    weights[static_cast<std::size_t>(*cell)] += mass;
  }
  return DiscreteMeasure(space, std::move(weights));
}

VerificationReport verify_midpoint(const DiscreteMeasure& mu0, const DiscreteMeasure& mut,
                                   const DiscreteMeasure& mu1, double t, double q,
                                   double tol) {
  const double full = solve_lq(mu0, mu1, q).lq.value();
  const double first = solve_lq(mu0, mut, q).lq.value();
  const double second = solve_lq(mut, mu1, q).lq.value();

  VerificationReport report;
  report.kind = "midpoint";
  const auto add = [&](const char* kind, double lhs, double target) {
    ReportRow row;
    row.kind = kind;
    row.q = q;
    row.t = t;
    row.lhs = lhs;
    row.rhs = target;
    row.margin = tol - std::abs(lhs - target);
    row.pass = std::abs(lhs - target) <= tol;
    if (!row.pass) row.reason = "violation";
    report.add(row);
  };
  add("midpoint_first", first, t * full);
  add("midpoint_second", second, (1.0 - t) * full);
  return report;
}

CorrelatedDecomposition correlated_decomposition(const DiscreteMeasure& mu0,
                                                 const DiscreteMeasure& mu1,
                                                 const Coupling& coupling,
                                                 const MinkowskiGrid& grid, double delta) {
  if (!(delta > 0.0)) throw Error("correlated_decomposition: delta must be > 0");
  if (!coupling.feasible)
    throw Error("correlated_decomposition: coupling must be feasible");

  // The coupling must act as an invertible map on cells: one target per
  // source and one source per target, matching the unique-optimal-map
  // setting this decomposition mirrors.
  std::unordered_map<int, int> target_of;
  std::unordered_map<int, int> source_of;
  for (const auto& [a, b, m] : coupling.entries(kMassEps)) {
    (void)m;
    if (target_of.count(a))
      throw NotAMapError("correlated_decomposition: source cell ships to several targets");
    target_of[a] = b;
    if (source_of.count(b))
      throw NotAMapError("correlated_decomposition: coupling map is not invertible");
    source_of[b] = a;
  }

  const int axes = grid.spec().axes();
  // Bucket edge sized so any two points in a bucket are closer than delta;
  // buckets are anchored at the grid origin.
  const double edge = delta / (std::sqrt(static_cast<double>(axes)) * (1.0 + 1e-12));
  const auto bucket = [&](int cell, std::vector<double>& key) {
    const double* c = grid.coords_data() + static_cast<std::size_t>(cell) * axes;
    for (int a = 0; a < axes; ++a) {
      const double lo = grid.spec().bounds[static_cast<std::size_t>(a)][0];
      key.push_back(std::floor((c[a] - lo) / edge));
    }
  };

  // Group sources by (source bucket, image bucket, exact density levels);
  // constant densities per part make both sides genuine uniform pieces.
  std::map<std::vector<double>, std::vector<int>> groups;
  for (const auto& [a, b] : target_of) {
    std::vector<double> key;
    key.reserve(2 * static_cast<std::size_t>(axes) + 2);
    bucket(a, key);
    bucket(b, key);
    key.push_back(mu0.density(a));
    key.push_back(mu1.density(b));
    groups[key].push_back(a);
  }

  std::vector<SimplePart> src_parts, dst_parts;
  for (auto& [key, cells] : groups) {
    (void)key;
    std::sort(cells.begin(), cells.end());
    SimplePart src, dst;
    src.cells = cells;
    for (int a : cells) {
      src.lambda += mu0.weight(a);
      dst.cells.push_back(target_of.at(a));
    }
    std::sort(dst.cells.begin(), dst.cells.end());
    dst.lambda = src.lambda;
    src_parts.push_back(std::move(src));
    dst_parts.push_back(std::move(dst));
  }

  return CorrelatedDecomposition{
      SimpleDecomposition(mu0.space(), std::move(src_parts)),
      SimpleDecomposition(mu1.space(), std::move(dst_parts)),
  };
}

}  // namespace lot
