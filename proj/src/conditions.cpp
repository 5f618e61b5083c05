#include "lot/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lot/distortion.hpp"
#include "lot/errors.hpp"

namespace lot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassEps = 1e-14;

}  // namespace

const char* to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::TCD: return "tcd";
    case ConditionKind::TCDe: return "tcd_e";
    case ConditionKind::TMCP: return "tmcp";
    case ConditionKind::TMCPe: return "tmcp_e";
    case ConditionKind::TBM: return "tbm";
    case ConditionKind::STBM: return "stbm";
    case ConditionKind::STBMStar: return "stbm_star";
  }
  return "?";
}

ConditionKind condition_kind_from_string(const std::string& s) {
  if (s == "tcd" || s == "TCD") return ConditionKind::TCD;
  if (s == "tcd_e" || s == "TCDe") return ConditionKind::TCDe;
  if (s == "tmcp" || s == "TMCP") return ConditionKind::TMCP;
  if (s == "tmcp_e" || s == "TMCPe") return ConditionKind::TMCPe;
  if (s == "tbm" || s == "TBM") return ConditionKind::TBM;
  if (s == "stbm" || s == "sTBM") return ConditionKind::STBM;
  if (s == "stbm_star" || s == "sTBM*") return ConditionKind::STBMStar;
  throw ConfigError("unknown condition kind: " + s);
}

std::vector<double> default_t_grid() { return {0.0, 0.125, 0.25, 0.5, 0.75, 1.0}; }

std::vector<double> default_nprime_grid(double N) { return {N + 1e-3, N + 1.0, 2.0 * N}; }

void ConditionSpec::apply_defaults() {
  if (t_grid.empty()) t_grid = default_t_grid();
  if (Nprime_grid.empty()) Nprime_grid = default_nprime_grid(N);
}

void ConditionSpec::validate() const {
  if (!(N > 1.0)) throw ConfigError("condition: N must be > 1");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("condition: q must be in (0,1)");
  if (!(tol >= 0.0)) throw ConfigError("condition: tol must be >= 0");
  for (double t : t_grid)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("condition: t values must be in [0,1]");
  for (double np : Nprime_grid)
    if (!(np > N)) throw ConfigError("condition: Nprime values must exceed N");
}

namespace {

const char* tbm_kind(TbmVariant variant) {
  switch (variant) {
    case TbmVariant::TBM: return "tbm";
    case TbmVariant::STBM: return "stbm";
    case TbmVariant::STBMStar: return "stbm_star";
  }
  return "?";
}

// Support cells of a measure, for the plan-based Brunn-Minkowski sides.
double support_mass_pow(const DiscreteMeasure& mu, double N) {
  return std::pow(mu.support_mass(), 1.0 / N);
}

}  // namespace

VerificationReport verify_tbm(const MinkowskiGrid& grid, std::span<const int> A,
                              std::span<const int> B, double t, double K, double N,
                              const TransportPlan* plan, TbmVariant variant, double tol) {
  if (!(N > 1.0)) throw Error("verify_tbm: N must be > 1");
  const FiniteCausalSpace& space = grid.space();
  const ThetaValue th = theta(space, A, B, K);

  double lhs = 0.0;
  if (variant == TbmVariant::TBM) {
    const MidpointSet mid = midpoint_set(grid, A, B, t);
    lhs = std::pow(mid.mass, 1.0 / N);
  } else {
    if (plan == nullptr) throw Error("verify_tbm: strong variants need a plan");
    lhs = support_mass_pow(displacement_interpolate(*plan, t), N);
  }

  const bool reduced = variant == TbmVariant::STBMStar;
  const double c0 = reduced ? sigma(K / N, 1.0 - t, th.value) : tau(K, N, 1.0 - t, th.value);
  const double c1 = reduced ? sigma(K / N, t, th.value) : tau(K, N, t, th.value);

  VerificationReport report;
  report.kind = tbm_kind(variant);
  ReportRow row;
  row.kind = report.kind;
  row.K = K;
  row.N = N;
  row.t = t;
  if (plan != nullptr) row.q = plan->coupling.q;
  row.lhs = lhs;
  if (std::isinf(c0) || std::isinf(c1)) {
    row.rhs = kInf;
    row.margin = -kInf;
    row.pass = false;
    row.reason = "DomainBlowup";
  } else {
    row.rhs = c0 * std::pow(space.mass(A), 1.0 / N) + c1 * std::pow(space.mass(B), 1.0 / N);
    row.margin = row.lhs - row.rhs;
    row.pass = row.lhs >= row.rhs - tol;
    if (!row.pass) row.reason = "violation";
  }
  report.add(row);
  return report;
}

namespace {

void validate_timelike_plan(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                            const TransportPlan& plan) {
  if (plan.grid == nullptr) throw Error("plan has no grid geometry");
  if (&plan.grid->space() != &mu0.space() || &mu0.space() != &mu1.space())
    throw Error("plan and measures must share one space");
  for (const auto& [a, b, m] : plan.coupling.entries(kMassEps)) {
    (void)m;
    if (!mu0.space().ell(a, b).chronological())
      throw NotTotallyTimelikeError("plan carries mass on a non-chronological pair");
  }
}

}  // namespace

VerificationReport verify_tcd(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                              const TransportPlan& plan, double K, double N,
                              std::span<const double> Nprime_grid,
                              std::span<const double> t_grid, double tol) {
  validate_timelike_plan(mu0, mu1, plan);
  const FiniteCausalSpace& space = mu0.space();
  const auto entries = plan.coupling.entries(kMassEps);

  VerificationReport report;
  report.kind = "tcd";
  for (double t : t_grid) {
    const DiscreteMeasure mut = displacement_interpolate(plan, t);
    for (double Np : Nprime_grid) {
      if (!(Np > N)) throw Error("verify_tcd: Nprime must exceed N");
      ReportRow row;
      row.kind = "tcd";
      row.K = K;
      row.N = N;
      row.q = plan.coupling.q;
      row.t = t;
      row.Nprime = Np;
      row.lhs = renyi_entropy(mut, Np);

      double rhs = 0.0;
      bool blowup = false;
      for (const auto& [a, b, mass] : entries) {
        const double ell = space.ell(a, b).value();
        const double t0 = tau(K, Np, 1.0 - t, ell);
        const double t1 = tau(K, Np, t, ell);
        if (std::isinf(t0) || std::isinf(t1)) {
          blowup = true;
          break;
        }
        rhs -= (t0 * std::pow(mu0.density(a), -1.0 / Np) +
                t1 * std::pow(mu1.density(b), -1.0 / Np)) *
               mass;
      }
      if (blowup) {
        row.rhs = -kInf;
        row.margin = -kInf;
        row.pass = false;
        row.reason = "DomainBlowup";
      } else {
        row.rhs = rhs;
        row.margin = rhs - row.lhs;
        row.pass = row.lhs <= rhs + tol;
        if (!row.pass) row.reason = "violation";
      }
      report.add(row);
    }
  }
  return report;
}

VerificationReport verify_tcd_e(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                const TransportPlan& plan, double K, double N,
                                std::span<const double> t_grid, double tol) {
  validate_timelike_plan(mu0, mu1, plan);
  if (!(N > 1.0)) throw Error("verify_tcd_e: N must be > 1");
  const FiniteCausalSpace& space = mu0.space();

  double lambda2 = 0.0;
  for (const auto& [a, b, mass] : plan.coupling.entries(kMassEps)) {
    const double ell = space.ell(a, b).value();
    lambda2 += mass * ell * ell;
  }
  const double lambda = std::sqrt(lambda2);

  const double u0 = exp_entropy(mu0, N);
  const double u1 = exp_entropy(mu1, N);

  VerificationReport report;
  report.kind = "tcd_e";
  for (double t : t_grid) {
    const DiscreteMeasure mut = displacement_interpolate(plan, t);
    ReportRow row;
    row.kind = "tcd_e";
    row.K = K;
    row.N = N;
    row.q = plan.coupling.q;
    row.t = t;
    row.lhs = exp_entropy(mut, N);
    const double c0 = sigma(K / N, 1.0 - t, lambda);
    const double c1 = sigma(K / N, t, lambda);
    if (std::isinf(c0) || std::isinf(c1)) {
      row.rhs = kInf;
      row.margin = -kInf;
      row.pass = false;
      row.reason = "DomainBlowup";
    } else {
      row.rhs = c0 * u0 + c1 * u1;
      row.margin = row.lhs - row.rhs;
      row.pass = row.lhs >= row.rhs - tol;
      if (!row.pass) row.reason = "violation";
    }
    report.add(row);
  }
  return report;
}

VerificationReport verify_tmcp(const DiscreteMeasure& mu, int x0, const MinkowskiGrid& grid,
                               double K, double N, TmcpVariant variant,
                               std::span<const double> t_grid,
                               std::span<const double> Nprime_grid, double tol) {
  if (&grid.space() != &mu.space()) throw Error("verify_tmcp: grid/measure mismatch");
  const FiniteCausalSpace& space = mu.space();
  const std::vector<int> support = mu.support();
  for (int a : support)
    if (!space.ell(a, x0).chronological())
      throw NotTotallyTimelikeError("verify_tmcp: support must lie strictly below x0");

  // The unique admissible plan couples every support cell with the Dirac
  // target; there is no transport exponent here, so the cost column holds the
  // raw separations.
  TransportPlan plan;
  plan.grid = &grid;
  plan.coupling.rows = support;
  plan.coupling.cols = {x0};
  plan.coupling.pi.resize(support.size());
  plan.coupling.cost.resize(support.size());
  plan.coupling.feasible = true;
  for (std::size_t i = 0; i < support.size(); ++i) {
    plan.coupling.pi[i] = mu.weight(support[i]);
    plan.coupling.cost[i] = space.ell(support[i], x0).value();
  }

  VerificationReport report;
  report.kind = variant == TmcpVariant::TMCP ? "tmcp" : "tmcp_e";

  if (variant == TmcpVariant::TMCP) {
    for (double t : t_grid) {
      const DiscreteMeasure mut = displacement_interpolate(plan, t);
      for (double Np : Nprime_grid) {
        if (!(Np > N)) throw Error("verify_tmcp: Nprime must exceed N");
        ReportRow row;
        row.kind = "tmcp";
        row.K = K;
        row.N = N;
        row.t = t;
        row.Nprime = Np;
        row.lhs = renyi_entropy(mut, Np);
        double rhs = 0.0;
        bool blowup = false;
        for (int a : support) {
          const double coeff = tau(K, Np, 1.0 - t, space.ell(a, x0).value());
          if (std::isinf(coeff)) {
            blowup = true;
            break;
          }
          rhs -= coeff * std::pow(mu.density(a), -1.0 / Np) * mu.weight(a);
        }
        if (blowup) {
          row.rhs = -kInf;
          row.margin = -kInf;
          row.pass = false;
          row.reason = "DomainBlowup";
        } else {
          row.rhs = rhs;
          row.margin = rhs - row.lhs;
          row.pass = row.lhs <= rhs + tol;
          if (!row.pass) row.reason = "violation";
        }
        report.add(row);
      }
    }
    return report;
  }

  if (!(N > 1.0)) throw Error("verify_tmcp: N must be > 1");
  double lambda2 = 0.0;
  for (int a : support) {
    const double ell = space.ell(a, x0).value();
    lambda2 += mu.weight(a) * ell * ell;
  }
  const double lambda = std::sqrt(lambda2);
  const double u_mu = exp_entropy(mu, N);

  for (double t : t_grid) {
    const DiscreteMeasure mut = displacement_interpolate(plan, t);
    ReportRow row;
    row.kind = "tmcp_e";
    row.K = K;
    row.N = N;
    row.t = t;
    row.lhs = exp_entropy(mut, N);
    const double c0 = sigma(K / N, 1.0 - t, lambda);
    if (std::isinf(c0)) {
      row.rhs = kInf;
      row.margin = -kInf;
      row.pass = false;
      row.reason = "DomainBlowup";
    } else {
      row.rhs = c0 * u_mu;
      row.margin = row.lhs - row.rhs;
      row.pass = row.lhs >= row.rhs - tol;
      if (!row.pass) row.reason = "violation";
    }
    report.add(row);
  }
  return report;
}

}  // namespace lot
