#pragma once

// Test-only oracles, independent of the solver implementation path.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "lot/causal_space.hpp"
#include "lot/measure.hpp"
#include "lot/time_value.hpp"

namespace lot::test {

/// Brute-force lq for equal-weight measures on k points per side: the extreme
/// couplings of the equal-weight transportation polytope are the permutation
/// matrices, so the maximum over all k! permutations is the exact optimum.
struct PermutationOracle {
  double best_objective = -std::numeric_limits<double>::infinity();
  std::vector<int> best_perm;
  TimeValue lq;
};

/// Maximum routable mass for equal-weight k-point measures: the fractional
/// transportation polytope has integral vertices, so the maximum equals
/// (1/k) times the largest matching over allowed arcs, and every maximum
/// matching extends to a permutation realizing it.
inline double max_mass_oracle(const FiniteCausalSpace& space,
                              const std::vector<int>& sources,
                              const std::vector<int>& targets) {
  const std::size_t k = sources.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int allowed = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (space.ell(sources[i], targets[static_cast<std::size_t>(perm[i])]).related())
        ++allowed;
    best = std::max(best, allowed);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(k);
}

inline PermutationOracle lq_permutation_oracle(const FiniteCausalSpace& space,
                                               const std::vector<int>& sources,
                                               const std::vector<int>& targets, double q) {
  const std::size_t k = sources.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);

  PermutationOracle out;
  do {
    TimeValue total = TimeValue::finite(0.0);
    for (std::size_t i = 0; i < k; ++i)
      total = total + space.ell(sources[i], targets[static_cast<std::size_t>(perm[i])]).pow(q);
    const double objective = total.value() / static_cast<double>(k);
    if (objective > out.best_objective) {
      out.best_objective = objective;
      out.best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (out.best_objective == -std::numeric_limits<double>::infinity())
    out.lq = TimeValue::unrelated();
  else
    out.lq = TimeValue::finite(std::max(0.0, out.best_objective)).pow(1.0 / q);
  return out;
}

}  // namespace lot::test
