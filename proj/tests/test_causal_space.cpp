#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lot/causal_space.hpp"
#include "lot/errors.hpp"
#include "lot/minkowski.hpp"

using namespace lot;

namespace {

TimeValue tv(double v) { return TimeValue::finite(v); }
TimeValue ninf() { return TimeValue::unrelated(); }

// 3 collinear points on the time axis at t = 0, 1, 2.
FiniteCausalSpace collinear3() {
  std::vector<TimeValue> ell = {tv(0), tv(1), tv(2),  //
                                ninf(), tv(0), tv(1), //
                                ninf(), ninf(), tv(0)};
  return FiniteCausalSpace(3, std::move(ell), {1.0, 1.0, 1.0});
}

// (0,0), (1,0.5), (2,0) in R^{1,1}: a bent timelike chain.
FiniteCausalSpace bent3() {
  const double seg = std::sqrt(0.75);
  std::vector<TimeValue> ell = {tv(0), tv(seg), tv(2),  //
                                ninf(), tv(0), tv(seg), //
                                ninf(), ninf(), tv(0)};
  return FiniteCausalSpace(3, std::move(ell), {1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("causal_relation classifies by sign") {
  std::vector<TimeValue> ell = {tv(0), tv(1), tv(0), ninf(),  //
                                ninf(), tv(0), ninf(), ninf(),
                                ninf(), ninf(), tv(0), ninf(),
                                ninf(), ninf(), ninf(), tv(0)};
  FiniteCausalSpace space(4, std::move(ell), {1, 1, 1, 1});
  CHECK(causal_relation(space, 0, 1) == CausalRelation::Chronological);
  CHECK(causal_relation(space, 0, 2) == CausalRelation::NullCausal);
  CHECK(causal_relation(space, 0, 3) == CausalRelation::Unrelated);
  CHECK_THROWS_AS(causal_relation(space, 0, 7), IndexError);
}

TEST_CASE("constructor enforces the axioms it can check cheaply") {
  CHECK_THROWS_AS(FiniteCausalSpace(2, {ninf(), tv(1), ninf(), tv(0)}, {1, 1}), Error);
  CHECK_THROWS_AS(FiniteCausalSpace(2, {tv(0), tv(1), ninf(), tv(0)}, {1, 0}), Error);
  CHECK_THROWS_AS(FiniteCausalSpace(2, {tv(0), tv(1), tv(0)}, {1, 1}), Error);
}

TEST_CASE("check_reverse_triangle") {
  SUBCASE("2-point space passes") {
    FiniteCausalSpace space(2, {tv(0), tv(1), ninf(), tv(0)}, {1, 1});
    CHECK(check_reverse_triangle(space, 0.0).pass);
  }
  SUBCASE("collinear equality passes") {
    CHECK(check_reverse_triangle(collinear3(), 0.0).pass);
  }
  SUBCASE("short diagonal fails with the offending triple") {
    // ell(0,2) = 1.5 < ell(0,1) + ell(1,2) = 2
    std::vector<TimeValue> ell = {tv(0), tv(1), tv(1.5),  //
                                  ninf(), tv(0), tv(1),   //
                                  ninf(), ninf(), tv(0)};
    FiniteCausalSpace space(3, std::move(ell), {1, 1, 1});
    const VerificationReport report = check_reverse_triangle(space, 1e-12);
    CHECK(!report.pass);
    REQUIRE(!report.rows.empty());
    CHECK(report.rows.front().reason == "triple 0,1,2");
    CHECK(report.rows.front().lhs == 1.5);
    CHECK(report.rows.front().rhs == 2.0);
  }
  SUBCASE("violation list respects the cap") {
    // ell(i,j) = 1 for all i < j on 6 points: every triple violates.
    const int n = 6;
    std::vector<TimeValue> ell(n * n, ninf());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) ell[i * n + j] = tv(i == j ? 0.0 : 1.0);
    FiniteCausalSpace space(n, std::move(ell), std::vector<double>(n, 1.0));
    const VerificationReport report = check_reverse_triangle(space, 0.0, 5);
    CHECK(!report.pass);
    CHECK(report.rows.size() == 5);
  }
}

TEST_CASE("age") {
  SUBCASE("collinear sum") {
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    CHECK(age(collinear3(), path).value() == 2.0);
  }
  SUBCASE("bent chain sums the closed forms") {
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    CHECK(age(bent3(), path).value() == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-12));
    CHECK(age(bent3(), path).value() == doctest::Approx(1.7320508).epsilon(1e-7));
  }
  SUBCASE("single segment") {
    const DiscretePath path{{0, 2}, {0.0, 1.0}};
    CHECK(age(bent3(), path).value() == 2.0);
  }
  SUBCASE("non-causal path throws") {
    const DiscretePath path{{2, 0}, {0.0, 1.0}};
    CHECK_THROWS_AS(age(collinear3(), path), NonCausalPathError);
  }
}

TEST_CASE("age invariants") {
  // Additivity under concatenation and invariance under reparametrization on
  // a sampled Minkowski chain.
  GridSpec spec;
  spec.bounds = {{0.0, 4.0}, {-1.0, 1.0}};
  spec.resolution = 8;
  const MinkowskiGrid grid = grid_sample(spec);
  const FiniteCausalSpace& space = grid.space();

  // A causal chain straight up the middle of the grid.
  std::vector<int> chain;
  for (int i = 0; i < 8; ++i) {
    const auto cell = grid.cell_index(MinkowskiPoint{0.25 + 0.5 * i, {0.0}});
    REQUIRE(cell.has_value());
    chain.push_back(*cell);
  }
  const DiscretePath whole{{chain[0], chain[2], chain[5], chain[7]}, {0, 0.3, 0.7, 1.0}};
  const DiscretePath left{{chain[0], chain[2], chain[5]}, {0, 0.4, 1.0}};
  const DiscretePath right{{chain[5], chain[7]}, {0, 1.0}};
  CHECK(age(space, whole).value() ==
        doctest::Approx(age(space, left).value() + age(space, right).value()).epsilon(1e-12));

  const DiscretePath reparam{{chain[0], chain[2], chain[5], chain[7]}, {0, 0.05, 0.9, 1.0}};
  CHECK(age(space, reparam).value() == doctest::Approx(age(space, whole).value()));

  // Telescoped reverse triangle: ell(first,last) >= age(path).
  CHECK(space.ell(chain[0], chain[7]).value() >= age(space, whole).value() - 1e-12);
}

TEST_CASE("is_geodesic_samples") {
  SUBCASE("affine collinear chain") {
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    CHECK(is_geodesic_samples(collinear3(), path, 1e-12));
  }
  SUBCASE("bent path is not a geodesic") {
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    CHECK(!is_geodesic_samples(bent3(), path, 1e-6));
  }
  SUBCASE("null chain is a geodesic") {
    std::vector<TimeValue> ell(9, tv(0.0));
    ell[3] = ninf();
    ell[6] = ninf();
    ell[7] = ninf();
    FiniteCausalSpace space(3, std::move(ell), {1, 1, 1});
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    CHECK(is_geodesic_samples(space, path, 0.0));
  }
  SUBCASE("geodesic samples imply age maximization") {
    const DiscretePath path{{0, 1, 2}, {0.0, 0.5, 1.0}};
    REQUIRE(is_geodesic_samples(collinear3(), path, 1e-12));
    CHECK(age(collinear3(), path).value() ==
          doctest::Approx(collinear3().ell(0, 2).value()).epsilon(1e-12));
  }
}

TEST_CASE("emerald") {
  SUBCASE("reflexive singleton") {
    const std::vector<int> a{0};
    CHECK(emerald(collinear3(), a, a) == std::vector<int>{0});
  }
  SUBCASE("double cone on a grid") {
    GridSpec spec;
    spec.bounds = {{0.0, 2.0}, {-1.0, 1.0}};
    spec.resolution = 10;
    const MinkowskiGrid grid = grid_sample(spec);
    const auto bottom = grid.cell_index(MinkowskiPoint{0.1, {0.1}});
    const auto top = grid.cell_index(MinkowskiPoint{1.9, {0.1}});
    REQUIRE(bottom);
    REQUIRE(top);
    const std::vector<int> A{*bottom}, B{*top};
    const std::vector<int> cells = emerald(grid.space(), A, B);
    CHECK(!cells.empty());

    // Membership equals the double light cone predicate, point by point.
    const MinkowskiPoint pa = grid.point(*bottom);
    const MinkowskiPoint pb = grid.point(*top);
    for (int x = 0; x < grid.space().size(); ++x) {
      const MinkowskiPoint p = grid.point(x);
      const bool in_cone = std::abs(p.x[0] - pa.x[0]) <= p.t - pa.t &&
                           std::abs(pb.x[0] - p.x[0]) <= pb.t - p.t;
      const bool member = std::binary_search(cells.begin(), cells.end(), x);
      CHECK(member == in_cone);
    }
  }
  SUBCASE("no causal pair gives the empty emerald") {
    // Two spacelike points.
    std::vector<TimeValue> ell = {tv(0), ninf(), ninf(), tv(0)};
    FiniteCausalSpace space(2, std::move(ell), {1, 1});
    const std::vector<int> a{0}, b{1};
    CHECK(emerald(space, a, b).empty());
  }
}
