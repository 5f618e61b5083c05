#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "lot/io.hpp"
#include "lot/minkowski.hpp"
#include "lot/report.hpp"
#include "lot/rng.hpp"

namespace lot {

/// Coordinate box covering `cells` grid cells per axis starting at the given
/// per-axis corner cell.
std::vector<std::array<double, 2>> cells_to_box(const GridSpec& spec,
                                                std::span<const int> corner, int cells);

struct PlacementBoxes {
  std::vector<std::array<double, 2>> a, b;
};

/// Congruent lattice-aligned squares at deep timelike separation: A low in
/// time, B high, spatial offsets kept small enough that every pair is
/// chronological. Requires cells <= resolution/4.
PlacementBoxes random_congruent_boxes(const GridSpec& spec, int cells, Rng& rng);

/// Placement in lattice units, so one seeded draw describes the same
/// continuum boxes on every nested refinement of the reference lattice.
struct LatticePlacement {
  std::vector<int> corner_a, corner_b;  // per-axis cell corners
  int cells = 1;                        // box side in lattice cells
};

/// cells = 0 draws the box side from [2, lattice_res/8].
LatticePlacement random_lattice_placement(int lattice_res, int axes, Rng& rng,
                                          int cells = 0);

/// Coordinate boxes of a placement on a grid refined by `scale` relative to
/// the placement lattice (corners and sides multiply by `scale`).
PlacementBoxes placement_boxes(const GridSpec& spec, const LatticePlacement& placement,
                               int scale);

struct VerifyResult {
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  bool all_pass = true;
};

/// Runs every condition of the config over every resolution and placement.
/// Under the Richardson tolerance model the per-family constant C is
/// calibrated from the coarse grid and both resolutions are re-judged with
/// tol = 1.5 C h (floor 1e-9); rows from both resolutions are reported.
VerifyResult run_verify(const ExperimentConfig& cfg);

std::string rows_to_csv(std::span<const ReportRow> rows);

/// Parses one row of the fixed CSV schema (used by report-merge).
ReportRow row_from_csv(const std::string& line);

}  // namespace lot
