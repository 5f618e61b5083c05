#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lot/causal_space.hpp"
#include "lot/conditions.hpp"
#include "lot/measure.hpp"
#include "lot/minkowski.hpp"
#include "lot/report.hpp"
#include "lot/transport.hpp"

namespace lot {

// FiniteCausalSpace:
//   {"n": int, "ell": [[number or "-inf"]], "ref_mass": [number], "labels": [string]}
nlohmann::json space_to_json(const FiniteCausalSpace& space);
FiniteCausalSpace space_from_json(const nlohmann::json& j);

// DiscreteMeasure: {"weights": [number]} alongside its space file.
nlohmann::json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const FiniteCausalSpace& space, const nlohmann::json& j);

// Coupling: sparse {"entries": [[row, col, mass]]} with global cell indices;
// the certificate exports the dual potentials as two vectors.
nlohmann::json coupling_to_json(const Coupling& coupling);
nlohmann::json certificate_to_json(const DualCertificate& cert);

nlohmann::json report_row_to_json(const ReportRow& row);
nlohmann::json report_rows_to_json(const std::vector<ReportRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Measure pair construction recipe for experiments.
struct PairSpec {
  enum class Type { UniformBoxes, DensityFile, RandomBoxes };
  Type type = Type::UniformBoxes;
  std::vector<std::array<double, 2>> box_a, box_b;  // UniformBoxes
  std::string mu0_file, mu1_file;                   // DensityFile
  int box_cells = 4;                                // RandomBoxes: square side in cells
  int placements = 1;                               // RandomBoxes: seeded placements
};

/// Where the space comes from: a grid spec or a space JSON file.
struct SpaceSource {
  std::optional<GridSpec> grid;
  std::string file;
};

enum class TolModel { Fixed, Richardson };

/// One experiment: space, measure pair, conditions to verify, tolerance
/// model, and the seed every random choice flows from.
struct ExperimentConfig {
  int schema = 1;
  SpaceSource space;
  PairSpec pair;
  std::vector<ConditionSpec> conditions;
  std::uint64_t seed = 0;
  std::vector<int> resolutions;  // Richardson pairs; empty = grid resolution only
  TolModel tol_model = TolModel::Richardson;
  double q = 0.5;  // solve-lq exponent
};

/// Strict parse: unknown fields are rejected with their JSON path.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lot
