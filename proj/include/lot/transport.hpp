#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "lot/measure.hpp"
#include "lot/minkowski.hpp"
#include "lot/report.hpp"
#include "lot/time_value.hpp"

namespace lot {

/// Dual potentials certifying optimality of a coupling: u over the source
/// support, v over the target support, with u_a + v_b >= ell(a,b)^q on every
/// admissible arc and equality on the support.
struct DualCertificate {
  std::vector<double> u;
  std::vector<double> v;
  double feasibility_residual = 0.0;  // max (c - u - v)+ over admissible arcs
  double slackness_residual = 0.0;    // max |c - u - v| over massed arcs
  bool valid = false;
};

/// Admissible coupling between two measures on a common space, stored dense
/// over the support index lists. `objective` is sum pi * ell^q (before the
/// 1/q power), -inf absorbing. When `feasible` is false the matrix is a
/// maximal-mass witness: no admissible coupling routes all mass over causal
/// arcs, and marginal equality holds only as an inequality.
struct Coupling {
  std::vector<int> rows;   // global cell indices of the source support
  std::vector<int> cols;   // global cell indices of the target support
  std::vector<double> pi;  // row-major rows.size() x cols.size()
  std::vector<double> cost;  // ell^q per arc, -inf on forbidden arcs
  double q = 0.5;
  TimeValue objective;
  bool feasible = false;
  DualCertificate certificate;

  double mass(std::size_t r, std::size_t c) const { return pi[r * cols.size() + c]; }

  /// Support triplets (global row index, global col index, mass), mass > eps.
  std::vector<std::tuple<int, int, double>> entries(double eps = 0.0) const;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

struct LqResult {
  TimeValue lq;
  Coupling coupling;
};

/// Exact solve of the q-cost transport maximization
///   lq(mu, nu)^q = max_pi sum pi_ab ell(a,b)^q
/// over the transportation polytope, for q in (0,1). Spacelike arcs
/// (ell = -inf) are removed from the graph; if no admissible coupling exists
/// on the remaining arcs the result is lq = -inf with a maximal-mass witness.
/// Feasible solves carry a dual certificate.
LqResult solve_lq(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double q);

/// Monotonicity check mode: exhaustive enumerates every subset (size guard 8)
/// and every permutation; sampled draws k random subset/permutation probes.
struct CycMonoMode {
  bool exhaustive = true;
  int samples = 0;
  std::uint64_t seed = 0;

  static CycMonoMode Exhaustive() { return {true, 0, 0}; }
  static CycMonoMode Sampled(int k, std::uint64_t seed) { return {false, k, seed}; }
};

struct CycMonoResult {
  bool monotone = true;
  // Violation witness: pair indices into `pairs` and the permutation sigma
  // applied to their second components.
  std::vector<int> witness_subset;
  std::vector<int> witness_sigma;
  double witness_gap = 0.0;  // permuted sum minus identity sum
};

/// Tests ell^q-cyclical monotonicity of a pair set: for each probed subset
/// and permutation sigma, sum ell^q(x_i, y_i) >= sum ell^q(x_i, y_sigma(i)).
CycMonoResult is_cyclically_monotone(const FiniteCausalSpace& space,
                                     std::span<const std::pair<int, int>> pairs,
                                     double q, const CycMonoMode& mode);

/// Chronology classification of a measure pair. Unrelated covers the case
/// where no admissible causal coupling exists at all.
enum class ChronologyClass {
  Unrelated,
  Causal,
  QTimelike,
  StrictlyQTimelike,
  TotallyTimelike,
};

const char* to_string(ChronologyClass c);

/// TotallyTimelike: every support pair chronological. QTimelike: some optimal
/// vertex found is timelike. StrictlyQTimelike: every optimal vertex found
/// under 16 perturbation re-solves (one graded, the rest seeded random,
/// magnitude 1e-7) is timelike; this is a surrogate for quantification over
/// all optimal couplings.
ChronologyClass classify_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double q, int n_perturb = 16, std::uint64_t seed = 0x9a1f);

/// d pi_f = f d pi, renormalized, marginals recomputed. f is aligned with
/// coupling.pi. The parent's dual potentials still certify the restriction.
Coupling restrict_coupling(const Coupling& coupling, std::span<const double> f);

/// Coupling plus the geodesic selector: every massed pair is interpolated
/// along the straight model-space geodesic between its cell centers and
/// snapped to the containing cell.
struct TransportPlan {
  Coupling coupling;
  const MinkowskiGrid* grid = nullptr;
};

/// mu_t = (e_t)_# of the plan. Throws OutOfDomainError if a geodesic point
/// leaves the grid box.
DiscreteMeasure displacement_interpolate(const TransportPlan& plan, double t);

/// Checks the t-midpoint identities
///   lq(mu0, mut) = t lq(mu0, mu1),  lq(mut, mu1) = (1-t) lq(mu0, mu1)
/// within tol (the >= direction is the content; <= follows from the reverse
/// triangle inequality and is asserted too).
VerificationReport verify_midpoint(const DiscreteMeasure& mu0, const DiscreteMeasure& mut,
                                   const DiscreteMeasure& mu1, double t, double q,
                                   double tol);

/// Paired decompositions with matched parts: source part j ships exactly to
/// target part j under the coupling, lambda_j = mu0(A_j), and every part has
/// coordinate diameter < delta on both sides.
struct CorrelatedDecomposition {
  SimpleDecomposition source;
  SimpleDecomposition target;
};

/// Requires the coupling to act as an invertible map on cells (one target per
/// source and one source per target); throws NotAMapError otherwise. Parts
/// are grouped by exact density level on both ends, so both returned
/// decompositions reproduce their measures exactly and the recombined
/// sub-couplings reproduce the input coupling.
CorrelatedDecomposition correlated_decomposition(const DiscreteMeasure& mu0,
                                                 const DiscreteMeasure& mu1,
                                                 const Coupling& coupling,
                                                 const MinkowskiGrid& grid, double delta);

}  // namespace lot
