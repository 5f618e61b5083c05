#pragma once

#include <span>
#include <string>
#include <vector>

#include "lot/measure.hpp"
#include "lot/minkowski.hpp"
#include "lot/report.hpp"
#include "lot/transport.hpp"

namespace lot {

enum class ConditionKind { TCD, TCDe, TMCP, TMCPe, TBM, STBM, STBMStar };

const char* to_string(ConditionKind kind);
ConditionKind condition_kind_from_string(const std::string& s);

/// Verifier parameters: curvature bound K, dimension bound N, transport
/// exponent q, evaluation grids and the pass tolerance.
struct ConditionSpec {
  ConditionKind kind = ConditionKind::TBM;
  double K = 0.0;
  double N = 2.0;
  double q = 0.5;
  std::vector<double> t_grid;       // default {0, 1/8, 1/4, 1/2, 3/4, 1}
  std::vector<double> Nprime_grid;  // default {N + 1e-3, N + 1, 2N}; values > N
  double tol = 0.0;

  void apply_defaults();
  void validate() const;
};

std::vector<double> default_t_grid();
std::vector<double> default_nprime_grid(double N);

enum class TbmVariant { TBM, STBM, STBMStar };

/// Brunn-Minkowski verifier at a single t.
///   TBM:  lhs = m(G_t(A,B))^{1/N}; requires (A,B) totally timelike.
///   sTBM / sTBM*: lhs = m(spt (e_t)_# eta)^{1/N} along the supplied plan.
/// rhs combines tau_{K,N} (TBM, sTBM) or sigma_{K/N} (sTBM*) at Theta(A,B).
/// An infinite coefficient records a failing row with reason DomainBlowup.
VerificationReport verify_tbm(const MinkowskiGrid& grid, std::span<const int> A,
                              std::span<const int> B, double t, double K, double N,
                              const TransportPlan* plan, TbmVariant variant, double tol);

/// Curvature-dimension verifier: for each (N', t) in the grids,
///   S_{N'}(mu_t) <= -sum [tau^{(1-t)}(ell(a,b)) rho0(a)^{-1/N'} +
///                         tau^{(t)}(ell(a,b)) rho1(b)^{-1/N'}] pi_ab + tol.
VerificationReport verify_tcd(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                              const TransportPlan& plan, double K, double N,
                              std::span<const double> Nprime_grid,
                              std::span<const double> t_grid, double tol);

/// Entropic variant: Lambda = (sum pi ell^2)^{1/2} and
///   U_N(mu_t) >= sigma_{K/N}^{(1-t)}(Lambda) U_N(mu0)
///              + sigma_{K/N}^{(t)}(Lambda) U_N(mu1) - tol.
VerificationReport verify_tcd_e(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                const TransportPlan& plan, double K, double N,
                                std::span<const double> t_grid, double tol);

enum class TmcpVariant { TMCP, TMCPe };

/// Measure contraction toward a point x0 strictly above the support of mu.
/// The plan is the product coupling with the Dirac target (the unique
/// admissible one), interpolated on the grid.
VerificationReport verify_tmcp(const DiscreteMeasure& mu, int x0, const MinkowskiGrid& grid,
                               double K, double N, TmcpVariant variant,
                               std::span<const double> t_grid,
                               std::span<const double> Nprime_grid, double tol);

}  // namespace lot
