#pragma once

#include <span>
#include <vector>

#include "lot/causal_space.hpp"

namespace lot {

/// Probability measure on a finite causal space. Every measure here is
/// absolutely continuous with respect to the reference measure (which has
/// full support), with density weights[i] / ref_mass[i].
class DiscreteMeasure {
 public:
  /// Weights must be nonnegative and sum to 1; drift below 1e-9 is
  /// renormalized, anything larger is rejected.
  DiscreteMeasure(const FiniteCausalSpace& space, std::vector<double> weights);

  static DiscreteMeasure dirac(const FiniteCausalSpace& space, int i);

  const FiniteCausalSpace& space() const { return *space_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  double density(int i) const {
    return weights_[static_cast<std::size_t>(i)] / space_->ref_mass(i);
  }

  std::vector<int> support() const;
  double support_mass() const;  // reference mass of the support

 private:
  const FiniteCausalSpace* space_;
  std::vector<double> weights_;
};

/// m_A: the uniform (normalized reference) measure on a nonempty cell set.
DiscreteMeasure uniform_measure(const FiniteCausalSpace& space, std::span<const int> A);

/// S_N(mu) = -sum rho^{1-1/N} dm, N > 1. Always in [-m(supp)^{1/N}, 0].
double renyi_entropy(const DiscreteMeasure& mu, double N);

/// Ent(mu) = sum rho log rho dm, with 0 log 0 = 0.
double boltzmann_entropy(const DiscreteMeasure& mu);

/// U_N(mu) = exp(-Ent(mu)/N).
double exp_entropy(const DiscreteMeasure& mu, double N);

/// True iff the supports are pairwise disjoint.
bool mutually_singular(std::span<const DiscreteMeasure> parts);

struct SimplePart {
  std::vector<int> cells;  // sorted
  double lambda = 0.0;
};

/// A simple measure presented as a convex combination of mutually singular
/// uniform measures: sum_j lambda_j m_{A_j}.
class SimpleDecomposition {
 public:
  SimpleDecomposition(const FiniteCausalSpace& space, std::vector<SimplePart> parts);

  const std::vector<SimplePart>& parts() const { return parts_; }
  const FiniteCausalSpace& space() const { return *space_; }
  DiscreteMeasure to_measure() const;

 private:
  const FiniteCausalSpace* space_;
  std::vector<SimplePart> parts_;
};

/// Level-set simple approximation mu^n: densities floored to the dyadic grid
/// 2^{-n} Z, support cells grouped by floored level, zero levels dropped, the
/// rest renormalized. Guarantees supp(mu^n) within supp(mu) and pre-normalized
/// density <= density(mu). Throws AllLevelsVanishError when everything floors
/// to zero.
SimpleDecomposition simple_sequence(const DiscreteMeasure& mu, int n);

}  // namespace lot
