#include "doctest.h"
#include "lot/causal_space.hpp"
#include "lot/minkowski.hpp"

// The parallel kernels must agree with their serial reference bit for bit:
// elementwise writes and exact min/max reductions only.

using namespace lot;

namespace {

MinkowskiGrid test_grid(int res) {
  GridSpec spec;
  spec.bounds = {{0.0, 3.0}, {-1.0, 1.0}};
  spec.resolution = res;
  return grid_sample(spec, Exec::Serial);
}

}  // namespace

TEST_CASE("grid sampling: serial and parallel ell matrices are identical") {
  GridSpec spec;
  spec.bounds = {{0.0, 3.0}, {-1.0, 1.0}};
  spec.resolution = 12;
  const MinkowskiGrid serial = grid_sample(spec, Exec::Serial);
  const MinkowskiGrid parallel = grid_sample(spec, Exec::Parallel);
  REQUIRE(serial.space().size() == parallel.space().size());
  for (int i = 0; i < serial.space().size(); ++i)
    for (int j = 0; j < serial.space().size(); ++j)
      CHECK(serial.space().ell(i, j).value() == parallel.space().ell(i, j).value());
}

TEST_CASE("reverse triangle scan: identical reports") {
  const MinkowskiGrid grid = test_grid(8);
  const VerificationReport a = check_reverse_triangle(grid.space(), 1e-9, 100, Exec::Serial);
  const VerificationReport b =
      check_reverse_triangle(grid.space(), 1e-9, 100, Exec::Parallel);
  CHECK(a.pass == b.pass);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(csv_row(a.rows[i]) == csv_row(b.rows[i]));

  // Same on a space with injected violations.
  std::vector<TimeValue> ell = grid.space().ell_matrix();
  const int n = grid.space().size();
  for (int j = 1; j < n; j += 7) {
    const std::size_t at = static_cast<std::size_t>(0) * n + j;
    if (ell[at].related() && ell[at].value() > 0.5)
      ell[at] = TimeValue::finite(ell[at].value() * 0.5);
  }
  const FiniteCausalSpace broken(n, std::move(ell), grid.space().ref_masses());
  const VerificationReport c = check_reverse_triangle(broken, 1e-9, 20, Exec::Serial);
  const VerificationReport d = check_reverse_triangle(broken, 1e-9, 20, Exec::Parallel);
  CHECK(c.pass == d.pass);
  CHECK(c.notes == d.notes);
  REQUIRE(c.rows.size() == d.rows.size());
  for (std::size_t i = 0; i < c.rows.size(); ++i)
    CHECK(c.rows[i].reason == d.rows[i].reason);
}

TEST_CASE("emerald scan: identical sets") {
  const MinkowskiGrid grid = test_grid(10);
  const std::vector<int> A = grid.box_cells(std::vector<std::array<double, 2>>{
      {0.0, 0.5}, {-0.4, 0.4}});
  const std::vector<int> B = grid.box_cells(std::vector<std::array<double, 2>>{
      {2.5, 3.0}, {-0.4, 0.4}});
  CHECK(emerald(grid.space(), A, B, Exec::Serial) ==
        emerald(grid.space(), A, B, Exec::Parallel));
}

TEST_CASE("midpoint enumeration and theta: identical results") {
  const MinkowskiGrid grid = test_grid(16);
  const std::vector<int> A = grid.box_cells(std::vector<std::array<double, 2>>{
      {0.0, 0.5}, {-0.25, 0.25}});
  const std::vector<int> B = grid.box_cells(std::vector<std::array<double, 2>>{
      {2.5, 3.0}, {-0.25, 0.25}});

  for (double t : {0.0, 0.3, 0.5, 1.0}) {
    const MidpointSet s = midpoint_set(grid, A, B, t, Exec::Serial);
    const MidpointSet p = midpoint_set(grid, A, B, t, Exec::Parallel);
    CHECK(s.cells == p.cells);
    CHECK(s.mass == p.mass);
    CHECK(s.has_timelike_pair == p.has_timelike_pair);
  }

  for (double K : {-1.0, 0.0, 1.0}) {
    const ThetaValue s = theta(grid.space(), A, B, K, Exec::Serial);
    const ThetaValue p = theta(grid.space(), A, B, K, Exec::Parallel);
    CHECK(s.value == p.value);
    CHECK(s.mode == p.mode);
  }
}
