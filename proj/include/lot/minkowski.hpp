#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "lot/causal_space.hpp"
#include "lot/exec.hpp"
#include "lot/time_value.hpp"

namespace lot {

/// Event in R^{1,d}: one time coordinate and d space coordinates.
struct MinkowskiPoint {
  double t = 0.0;
  std::vector<double> x;
};

/// sqrt(dt^2 - |dx|^2) when dt >= 0 and the interval is causal, else -inf.
/// Future orientation is strict: dt must be >= 0.
TimeValue minkowski_ell(const MinkowskiPoint& p, const MinkowskiPoint& q);

/// Axis-aligned box discretization: `resolution` cells per axis over the
/// given bounds (axis 0 is time). Cell centers carry the cell volume as
/// reference mass, so the reference measure is Lebesgue restricted to the box.
struct GridSpec {
  std::vector<std::array<double, 2>> bounds;
  int resolution = 1;

  int axes() const { return static_cast<int>(bounds.size()); }
  double cell_edge(int axis) const {
    return (bounds[static_cast<std::size_t>(axis)][1] -
            bounds[static_cast<std::size_t>(axis)][0]) /
           resolution;
  }
  double max_cell_edge() const;
  double cell_volume() const;
  long point_count() const;
  void validate() const;
};

inline constexpr long kGridPointCap = 1000000;

class MinkowskiGrid {
 public:
  static MinkowskiGrid sample(const GridSpec& spec, Exec exec = kDefaultExec);

  const GridSpec& spec() const { return spec_; }
  const FiniteCausalSpace& space() const { return space_; }

  MinkowskiPoint point(int i) const;

  /// Flat point-major coordinate storage, axes() values per point.
  const double* coords_data() const { return coords_.data(); }

  /// Containing cell of a point (floor assignment), or nullopt outside the box.
  std::optional<int> cell_index(const MinkowskiPoint& p) const;

  /// Discretization scale h = max cell edge.
  double h() const { return spec_.max_cell_edge(); }

  /// Cells whose centers lie inside the given axis-aligned box
  /// (per-axis [lo, hi] ranges, time first). Sorted ascending.
  std::vector<int> box_cells(std::span<const std::array<double, 2>> box) const;

 private:
  MinkowskiGrid(GridSpec spec, std::vector<double> coords, FiniteCausalSpace space);

  GridSpec spec_;
  std::vector<double> coords_;  // point-major, axes() per point
  FiniteCausalSpace space_;
};

/// Convenience wrapper matching the operation name; the grid keeps the
/// geometry needed for snapping.
MinkowskiGrid grid_sample(const GridSpec& spec, Exec exec = kDefaultExec);

/// (1-t) p + t q; exact affine interpolation along the unique Minkowski
/// geodesic. Throws NonCausalPairError when minkowski_ell(p,q) = -inf.
MinkowskiPoint geodesic_point(const MinkowskiPoint& p, const MinkowskiPoint& q, double t);

struct MidpointSet {
  std::vector<int> cells;  // sorted, unique
  bool has_timelike_pair = false;
  double mass = 0.0;
};

/// G_t(A,B) on the grid: geodesic points of all chronological pairs in A x B,
/// snapped to containing cells. Empty (flagged) when no timelike pair exists.
MidpointSet midpoint_set(const MinkowskiGrid& grid, std::span<const int> A,
                         std::span<const int> B, double t, Exec exec = kDefaultExec);

enum class ThetaMode { Inf, Sup };

struct ThetaValue {
  double value = 0.0;
  ThetaMode mode = ThetaMode::Inf;
};

/// Inf (K >= 0) or sup (K < 0) of ell over A x B. Throws
/// NotTotallyTimelikeError unless every pair satisfies ell > 0.
ThetaValue theta(const FiniteCausalSpace& space, std::span<const int> A,
                 std::span<const int> B, double K, Exec exec = kDefaultExec);

}  // namespace lot
