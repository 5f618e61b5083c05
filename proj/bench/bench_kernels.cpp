// Times the OpenMP kernels against their serial reference implementations.

#include <chrono>
#include <cstdio>
#include <functional>

#include "lot/causal_space.hpp"
#include "lot/minkowski.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lot;

namespace {

double time_of(const std::function<void()>& fn, int repeats = 3) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s < best) best = s;
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4fs %10.4fs %8.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  GridSpec spec;
  spec.bounds = {{0.0, 4.0}, {-1.0, 1.0}};
  spec.resolution = 48;  // 2304 points, ~5.3M matrix entries

  row("ell matrix assembly (48^2)",
      time_of([&] { grid_sample(spec, Exec::Serial); }),
      time_of([&] { grid_sample(spec, Exec::Parallel); }));

  const MinkowskiGrid grid = grid_sample(spec);

  GridSpec small = spec;
  small.resolution = 9;  // 81 points -> 531k triples
  const MinkowskiGrid tri = grid_sample(small);
  row("reverse triangle scan (9^2)",
      time_of([&] { check_reverse_triangle(tri.space(), 1e-9, 100, Exec::Serial); }),
      time_of([&] { check_reverse_triangle(tri.space(), 1e-9, 100, Exec::Parallel); }));

  const std::vector<int> A = grid.box_cells(std::vector<std::array<double, 2>>{
      {0.0, 1.0}, {-0.75, 0.75}});
  const std::vector<int> B = grid.box_cells(std::vector<std::array<double, 2>>{
      {3.0, 4.0}, {-0.75, 0.75}});
  std::printf("pair block: %zu x %zu\n", A.size(), B.size());

  row("theta reduction",
      time_of([&] { theta(grid.space(), A, B, 0.0, Exec::Serial); }),
      time_of([&] { theta(grid.space(), A, B, 0.0, Exec::Parallel); }));

  row("midpoint enumeration",
      time_of([&] { midpoint_set(grid, A, B, 0.5, Exec::Serial); }),
      time_of([&] { midpoint_set(grid, A, B, 0.5, Exec::Parallel); }));

  row("emerald scan",
      time_of([&] { emerald(grid.space(), A, B, Exec::Serial); }),
      time_of([&] { emerald(grid.space(), A, B, Exec::Parallel); }));

  return 0;
}
