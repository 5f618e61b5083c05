#include "lot/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lot/errors.hpp"

namespace lot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Raw interval value on flat coordinate arrays; axis 0 is time.
inline double interval(const double* p, const double* q, int axes) {
  const double dt = q[0] - p[0];
  if (dt < 0.0) return kNegInf;
  double s2 = dt * dt;
  for (int a = 1; a < axes; ++a) {
    const double dx = q[a] - p[a];
    s2 -= dx * dx;
  }
  return s2 >= 0.0 ? std::sqrt(s2) : kNegInf;
}

}  // namespace

TimeValue minkowski_ell(const MinkowskiPoint& p, const MinkowskiPoint& q) {
  if (p.x.size() != q.x.size())
    throw DimensionMismatchError("minkowski_ell: dimension mismatch");
  const double dt = q.t - p.t;
  if (dt < 0.0) return TimeValue::unrelated();
  double s2 = dt * dt;
  for (std::size_t a = 0; a < p.x.size(); ++a) {
    const double dx = q.x[a] - p.x[a];
    s2 -= dx * dx;
  }
  if (s2 < 0.0) return TimeValue::unrelated();
  return TimeValue::finite(std::sqrt(s2));
}

double GridSpec::max_cell_edge() const {
  double h = 0.0;
  for (int a = 0; a < axes(); ++a) h = std::max(h, cell_edge(a));
  return h;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < axes(); ++a) v *= cell_edge(a);
  return v;
}

long GridSpec::point_count() const {
  long count = 1;
  for (int a = 0; a < axes(); ++a) {
    count *= resolution;
    if (count > kGridPointCap) return count;
  }
  return count;
}

void GridSpec::validate() const {
  if (bounds.empty()) throw Error("GridSpec: need at least the time axis");
  if (resolution < 1) throw Error("GridSpec: resolution must be >= 1");
  for (const auto& b : bounds)
    if (!(b[0] < b[1])) throw Error("GridSpec: bounds must satisfy lo < hi");
  if (point_count() > kGridPointCap)
    throw Error("GridSpec: point count exceeds cap of " + std::to_string(kGridPointCap));
}

MinkowskiGrid::MinkowskiGrid(GridSpec spec, std::vector<double> coords,
                             FiniteCausalSpace space)
    : spec_(std::move(spec)), coords_(std::move(coords)), space_(std::move(space)) {}

MinkowskiGrid MinkowskiGrid::sample(const GridSpec& spec, Exec exec) {
  spec.validate();
  const int axes = spec.axes();
  const int n = static_cast<int>(spec.point_count());

  std::vector<double> coords(static_cast<std::size_t>(n) * axes);
  for (int i = 0; i < n; ++i) {
    int rem = i;
    for (int a = axes - 1; a >= 0; --a) {
      const int idx = rem % spec.resolution;
      rem /= spec.resolution;
      coords[static_cast<std::size_t>(i) * axes + a] =
          spec.bounds[static_cast<std::size_t>(a)][0] + (idx + 0.5) * spec.cell_edge(a);
    }
  }

  std::vector<TimeValue> ell(static_cast<std::size_t>(n) * n);
  const double* c = coords.data();
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ell[static_cast<std::size_t>(i) * n + j] =
            TimeValue::from_raw(interval(c + static_cast<std::size_t>(i) * axes,
                                         c + static_cast<std::size_t>(j) * axes, axes));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ell[static_cast<std::size_t>(i) * n + j] =
            TimeValue::from_raw(interval(c + static_cast<std::size_t>(i) * axes,
                                         c + static_cast<std::size_t>(j) * axes, axes));
  }

  std::vector<double> ref_mass(static_cast<std::size_t>(n), spec.cell_volume());
  FiniteCausalSpace space(n, std::move(ell), std::move(ref_mass));
  return MinkowskiGrid(spec, std::move(coords), std::move(space));
}

MinkowskiGrid grid_sample(const GridSpec& spec, Exec exec) {
  return MinkowskiGrid::sample(spec, exec);
}

MinkowskiPoint MinkowskiGrid::point(int i) const {
  if (i < 0 || i >= space_.size()) throw IndexError("grid point index out of range");
  const int axes = spec_.axes();
  MinkowskiPoint p;
  p.t = coords_[static_cast<std::size_t>(i) * axes];
  p.x.assign(coords_.begin() + static_cast<std::size_t>(i) * axes + 1,
             coords_.begin() + static_cast<std::size_t>(i + 1) * axes);
  return p;
}

std::optional<int> MinkowskiGrid::cell_index(const MinkowskiPoint& p) const {
  const int axes = spec_.axes();
  if (static_cast<int>(p.x.size()) + 1 != axes)
    throw DimensionMismatchError("cell_index: dimension mismatch");
  int index = 0;
  for (int a = 0; a < axes; ++a) {
    const double v = a == 0 ? p.t : p.x[static_cast<std::size_t>(a - 1)];
    const double lo = spec_.bounds[static_cast<std::size_t>(a)][0];
    const double hi = spec_.bounds[static_cast<std::size_t>(a)][1];
    if (!(v >= lo && v <= hi)) return std::nullopt;  // also rejects NaN
    int idx = static_cast<int>(std::floor((v - lo) / spec_.cell_edge(a)));
    if (idx == spec_.resolution) idx = spec_.resolution - 1;  // v == hi
    index = index * spec_.resolution + idx;
  }
  return index;
}

std::vector<int> MinkowskiGrid::box_cells(std::span<const std::array<double, 2>> box) const {
  if (static_cast<int>(box.size()) != spec_.axes())
    throw DimensionMismatchError("box_cells: dimension mismatch");
  const int axes = spec_.axes();
  std::vector<int> out;
  for (int i = 0; i < space_.size(); ++i) {
    bool inside = true;
    for (int a = 0; a < axes && inside; ++a) {
      const double v = coords_[static_cast<std::size_t>(i) * axes + a];
      inside = v >= box[static_cast<std::size_t>(a)][0] &&
               v <= box[static_cast<std::size_t>(a)][1];
    }
    if (inside) out.push_back(i);
  }
  return out;
}

MinkowskiPoint geodesic_point(const MinkowskiPoint& p, const MinkowskiPoint& q, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("geodesic_point: t must be in [0,1]");
  if (!minkowski_ell(p, q).related())
    throw NonCausalPairError("geodesic_point: endpoints are not causally related");
  MinkowskiPoint r;
  r.t = (1.0 - t) * p.t + t * q.t;
  r.x.resize(p.x.size());
  for (std::size_t a = 0; a < p.x.size(); ++a)
    r.x[a] = (1.0 - t) * p.x[a] + t * q.x[a];
  return r;
}

namespace {

void validate_cells(const FiniteCausalSpace& space, std::span<const int> cells,
                    const char* what) {
  for (int c : cells)
    if (c < 0 || c >= space.size())
      throw IndexError(std::string(what) + ": cell index out of range");
}

// One chronological pair -> containing cell of its geodesic point, -1 otherwise.
inline int midpoint_cell(const MinkowskiGrid& grid, const double* coords, int axes,
                         const GridSpec& spec, int a, int b, double t) {
  const TimeValue sep = grid.space().ell(a, b);
  if (!sep.chronological()) return -1;
  int index = 0;
  for (int ax = 0; ax < axes; ++ax) {
    const double v = (1.0 - t) * coords[static_cast<std::size_t>(a) * axes + ax] +
                     t * coords[static_cast<std::size_t>(b) * axes + ax];
    const double lo = spec.bounds[static_cast<std::size_t>(ax)][0];
    const double hi = spec.bounds[static_cast<std::size_t>(ax)][1];
    if (v < lo || v > hi) return -1;
    int idx = static_cast<int>(std::floor((v - lo) / spec.cell_edge(ax)));
    if (idx == spec.resolution) idx = spec.resolution - 1;
    index = index * spec.resolution + idx;
  }
  return index;
}

}  // namespace

MidpointSet midpoint_set(const MinkowskiGrid& grid, std::span<const int> A,
                         std::span<const int> B, double t, Exec exec) {
  if (A.empty() || B.empty()) throw Error("midpoint_set: A and B must be nonempty");
  if (!(t >= 0.0 && t <= 1.0)) throw Error("midpoint_set: t must be in [0,1]");
  validate_cells(grid.space(), A, "midpoint_set");
  validate_cells(grid.space(), B, "midpoint_set");

  const int axes = grid.spec().axes();
  const long pairs = static_cast<long>(A.size()) * static_cast<long>(B.size());
  std::vector<int> cell(static_cast<std::size_t>(pairs), -1);

  const GridSpec& spec = grid.spec();
  const double* flat = grid.coords_data();

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long p = 0; p < pairs; ++p) {
      const int a = A[static_cast<std::size_t>(p) / B.size()];
      const int b = B[static_cast<std::size_t>(p) % B.size()];
      cell[static_cast<std::size_t>(p)] = midpoint_cell(grid, flat, axes, spec, a, b, t);
    }
  } else {
    for (long p = 0; p < pairs; ++p) {
      const int a = A[static_cast<std::size_t>(p) / B.size()];
      const int b = B[static_cast<std::size_t>(p) % B.size()];
      cell[static_cast<std::size_t>(p)] = midpoint_cell(grid, flat, axes, spec, a, b, t);
    }
  }

  MidpointSet out;
  std::vector<int> hits;
  hits.reserve(cell.size());
  for (int c : cell)
    if (c >= 0) hits.push_back(c);
  out.has_timelike_pair = !hits.empty();
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  out.cells = std::move(hits);
  for (int c : out.cells) out.mass += grid.space().ref_mass(c);
  return out;
}

ThetaValue theta(const FiniteCausalSpace& space, std::span<const int> A,
                 std::span<const int> B, double K, Exec exec) {
  if (A.empty() || B.empty()) throw Error("theta: A and B must be nonempty");
  validate_cells(space, A, "theta");
  validate_cells(space, B, "theta");

  const long pairs = static_cast<long>(A.size()) * static_cast<long>(B.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = kNegInf;

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (long p = 0; p < pairs; ++p) {
      const int a = A[static_cast<std::size_t>(p) / B.size()];
      const int b = B[static_cast<std::size_t>(p) % B.size()];
      const double v = space.ell(a, b).value();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  } else {
    for (long p = 0; p < pairs; ++p) {
      const int a = A[static_cast<std::size_t>(p) / B.size()];
      const int b = B[static_cast<std::size_t>(p) % B.size()];
      const double v = space.ell(a, b).value();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  if (!(lo > 0.0))
    throw NotTotallyTimelikeError("theta: a pair in A x B is not chronological");
  ThetaValue out;
  out.mode = K >= 0.0 ? ThetaMode::Inf : ThetaMode::Sup;
  out.value = K >= 0.0 ? lo : hi;
  return out;
}

}  // namespace lot
