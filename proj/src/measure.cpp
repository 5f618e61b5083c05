#include "lot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lot/errors.hpp"

namespace lot {

namespace {

constexpr double kNormalizationDrift = 1e-9;

}  // namespace

DiscreteMeasure::DiscreteMeasure(const FiniteCausalSpace& space, std::vector<double> weights)
    : space_(&space), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<std::size_t>(space.size()))
    throw Error("DiscreteMeasure: weights must have one entry per point");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error("DiscreteMeasure: weights must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kNormalizationDrift)
    throw Error("DiscreteMeasure: weights sum to " + std::to_string(sum) +
                ", beyond the renormalization drift");
  for (double& w : weights_) w /= sum;
}

DiscreteMeasure DiscreteMeasure::dirac(const FiniteCausalSpace& space, int i) {
  if (i < 0 || i >= space.size()) throw IndexError("dirac: index out of range");
  std::vector<double> w(static_cast<std::size_t>(space.size()), 0.0);
  w[static_cast<std::size_t>(i)] = 1.0;
  return DiscreteMeasure(space, std::move(w));
}

std::vector<int> DiscreteMeasure::support() const {
  std::vector<int> out;
  for (int i = 0; i < space_->size(); ++i)
    if (weights_[static_cast<std::size_t>(i)] > 0.0) out.push_back(i);
  return out;
}

double DiscreteMeasure::support_mass() const {
  double m = 0.0;
  for (int i = 0; i < space_->size(); ++i)
    if (weights_[static_cast<std::size_t>(i)] > 0.0) m += space_->ref_mass(i);
  return m;
}

DiscreteMeasure uniform_measure(const FiniteCausalSpace& space, std::span<const int> A) {
  if (A.empty()) throw Error("uniform_measure: A must be nonempty");
  const double total = space.mass(A);
  std::vector<double> w(static_cast<std::size_t>(space.size()), 0.0);
  for (int i : A) w[static_cast<std::size_t>(i)] = space.ref_mass(i) / total;
  return DiscreteMeasure(space, std::move(w));
}

double renyi_entropy(const DiscreteMeasure& mu, double N) {
  if (!(N > 1.0)) throw Error("renyi_entropy: N must be > 1");
  const double e = 1.0 - 1.0 / N;
  double s = 0.0;
  for (int i = 0; i < mu.space().size(); ++i) {
    const double w = mu.weight(i);
    if (w <= 0.0) continue;
    s += std::pow(mu.density(i), e) * mu.space().ref_mass(i);
  }
  return -s;
}

double boltzmann_entropy(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (int i = 0; i < mu.space().size(); ++i) {
    const double w = mu.weight(i);
    if (w <= 0.0) continue;  // 0 log 0 = 0
    s += w * std::log(mu.density(i));
  }
  return s;
}

double exp_entropy(const DiscreteMeasure& mu, double N) {
  if (!(N > 1.0)) throw Error("exp_entropy: N must be > 1");
  return std::exp(-boltzmann_entropy(mu) / N);
}

bool mutually_singular(std::span<const DiscreteMeasure> parts) {
  if (parts.empty()) return true;
  const int n = parts.front().space().size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const DiscreteMeasure& mu : parts) {
    if (mu.space().size() != n)
      throw Error("mutually_singular: measures must live on the same space");
    for (int i = 0; i < n; ++i) {
      if (mu.weight(i) <= 0.0) continue;
      if (seen[static_cast<std::size_t>(i)]) return false;
      seen[static_cast<std::size_t>(i)] = 1;
    }
  }
  return true;
}

SimpleDecomposition::SimpleDecomposition(const FiniteCausalSpace& space,
                                         std::vector<SimplePart> parts)
    : space_(&space), parts_(std::move(parts)) {
  if (parts_.empty()) throw Error("SimpleDecomposition: need at least one part");
  std::vector<char> seen(static_cast<std::size_t>(space.size()), 0);
  double sum = 0.0;
  for (SimplePart& part : parts_) {
    if (part.cells.empty()) throw Error("SimpleDecomposition: empty part");
    if (!(part.lambda > 0.0)) throw Error("SimpleDecomposition: lambda must be > 0");
    std::sort(part.cells.begin(), part.cells.end());
    for (int c : part.cells) {
      if (c < 0 || c >= space.size()) throw IndexError("SimpleDecomposition: bad cell");
      if (seen[static_cast<std::size_t>(c)])
        throw Error("SimpleDecomposition: parts must be disjoint");
      seen[static_cast<std::size_t>(c)] = 1;
    }
    sum += part.lambda;
  }
  if (std::abs(sum - 1.0) > kNormalizationDrift)
    throw Error("SimpleDecomposition: lambdas sum to " + std::to_string(sum));
  for (SimplePart& part : parts_) part.lambda /= sum;
}

DiscreteMeasure SimpleDecomposition::to_measure() const {
  std::vector<double> w(static_cast<std::size_t>(space_->size()), 0.0);
  for (const SimplePart& part : parts_) {
    const double mass = space_->mass(part.cells);
    for (int c : part.cells)
      w[static_cast<std::size_t>(c)] += part.lambda * space_->ref_mass(c) / mass;
  }
  return DiscreteMeasure(*space_, std::move(w));
}

SimpleDecomposition simple_sequence(const DiscreteMeasure& mu, int n) {
  if (n < 1) throw Error("simple_sequence: n must be >= 1");
  const double scale = std::exp2(n);

  // Group support cells by floored dyadic density level; levels are exact
  // dyadic doubles, so grouping by value is exact.
  std::map<double, std::vector<int>> levels;
  for (int i = 0; i < mu.space().size(); ++i) {
    if (mu.weight(i) <= 0.0) continue;
    const double level = std::floor(mu.density(i) * scale) / scale;
    if (level <= 0.0) continue;
    levels[level].push_back(i);
  }
  if (levels.empty())
    throw AllLevelsVanishError("simple_sequence: all density levels floor to zero");

  double z = 0.0;
  for (const auto& [level, cells] : levels) z += level * mu.space().mass(cells);

  std::vector<SimplePart> parts;
  parts.reserve(levels.size());
  for (const auto& [level, cells] : levels) {
    SimplePart part;
    part.cells = cells;
    part.lambda = level * mu.space().mass(cells) / z;
    parts.push_back(std::move(part));
  }
  return SimpleDecomposition(mu.space(), std::move(parts));
}

}  // namespace lot
