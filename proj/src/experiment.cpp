#include "lot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lot/conditions.hpp"
#include "lot/errors.hpp"
#include "lot/transport.hpp"

namespace lot {

std::vector<std::array<double, 2>> cells_to_box(const GridSpec& spec,
                                                std::span<const int> corner, int cells) {
  if (static_cast<int>(corner.size()) != spec.axes())
    throw Error("cells_to_box: corner must name one cell per axis");
  std::vector<std::array<double, 2>> box;
  for (int a = 0; a < spec.axes(); ++a) {
    const int c = corner[static_cast<std::size_t>(a)];
    if (c < 0 || c + cells > spec.resolution) throw Error("cells_to_box: box leaves grid");
    const double lo = spec.bounds[static_cast<std::size_t>(a)][0];
    const double h = spec.cell_edge(a);
    box.push_back({lo + c * h, lo + (c + cells) * h});
  }
  return box;
}

LatticePlacement random_lattice_placement(int lattice_res, int axes, Rng& rng,
                                          int cells) {
  const int r = lattice_res;
  if (cells > r / 4) throw Error("random_lattice_placement: need cells <= lattice/4");
  LatticePlacement p;
  p.cells = cells > 0 ? cells : static_cast<int>(rng.uniform_int(2, std::max(2, r / 8)));
  p.corner_a.resize(static_cast<std::size_t>(axes));
  p.corner_b.resize(static_cast<std::size_t>(axes));
  // Time axis: A in the lowest eighth, B in the top quarter.
  p.corner_a[0] = static_cast<int>(rng.uniform_int(0, std::max(0, r / 8)));
  p.corner_b[0] = static_cast<int>(rng.uniform_int((3 * r) / 4, r - p.cells));
  // Space axes: both near the middle so every pair stays chronological.
  for (int a = 1; a < axes; ++a) {
    const int lo = (3 * r) / 8;
    const int hi = std::max(lo, (5 * r) / 8 - p.cells);
    p.corner_a[static_cast<std::size_t>(a)] = static_cast<int>(rng.uniform_int(lo, hi));
    p.corner_b[static_cast<std::size_t>(a)] = static_cast<int>(rng.uniform_int(lo, hi));
  }
  return p;
}

PlacementBoxes placement_boxes(const GridSpec& spec, const LatticePlacement& placement,
                               int scale) {
  if (scale < 1) throw Error("placement_boxes: scale must be >= 1");
  std::vector<int> corner_a, corner_b;
  for (int c : placement.corner_a) corner_a.push_back(c * scale);
  for (int c : placement.corner_b) corner_b.push_back(c * scale);
  return PlacementBoxes{cells_to_box(spec, corner_a, placement.cells * scale),
                        cells_to_box(spec, corner_b, placement.cells * scale)};
}

PlacementBoxes random_congruent_boxes(const GridSpec& spec, int cells, Rng& rng) {
  return placement_boxes(spec, random_lattice_placement(spec.resolution, spec.axes(), rng, cells),
                         1);
}

namespace {

struct Instance {
  std::vector<int> A, B;
};

// Random placements are drawn once in units of the coarsest lattice, so the
// same continuum boxes are evaluated at every nested resolution.
std::vector<LatticePlacement> draw_placements(const PairSpec& pair, int lattice_res,
                                              int axes, std::uint64_t seed) {
  std::vector<LatticePlacement> out;
  if (pair.type != PairSpec::Type::RandomBoxes) return out;
  const int cells = std::min(pair.box_cells, std::max(1, lattice_res / 4));
  Rng rng(seed);
  for (int p = 0; p < pair.placements; ++p) {
    Rng stream = rng.fork(static_cast<std::uint64_t>(p) + 1);
    out.push_back(random_lattice_placement(lattice_res, axes, stream, cells));
  }
  return out;
}

std::vector<Instance> build_instances(const MinkowskiGrid& grid, const PairSpec& pair,
                                      const FiniteCausalSpace& space,
                                      const std::vector<LatticePlacement>& placements,
                                      int scale) {
  std::vector<Instance> out;
  switch (pair.type) {
    case PairSpec::Type::UniformBoxes: {
      Instance inst;
      inst.A = grid.box_cells(pair.box_a);
      inst.B = grid.box_cells(pair.box_b);
      if (inst.A.empty() || inst.B.empty())
        throw ConfigError("pair: a box contains no grid cells");
      out.push_back(std::move(inst));
      break;
    }
    case PairSpec::Type::DensityFile: {
      nlohmann::json j0 = nlohmann::json::parse(read_text_file(pair.mu0_file));
      nlohmann::json j1 = nlohmann::json::parse(read_text_file(pair.mu1_file));
      Instance inst;
      inst.A = measure_from_json(space, j0).support();
      inst.B = measure_from_json(space, j1).support();
      out.push_back(std::move(inst));
      break;
    }
    case PairSpec::Type::RandomBoxes: {
      for (const LatticePlacement& placement : placements) {
        const PlacementBoxes boxes = placement_boxes(grid.spec(), placement, scale);
        Instance inst;
        inst.A = grid.box_cells(boxes.a);
        inst.B = grid.box_cells(boxes.b);
        out.push_back(std::move(inst));
      }
      break;
    }
  }
  return out;
}

// Target point for the contraction conditions: the latest cell of B.
int contraction_target(const MinkowskiGrid& grid, const std::vector<int>& B) {
  int best = B.front();
  double best_t = grid.point(best).t;
  for (int c : B) {
    const double t = grid.point(c).t;
    if (t > best_t) {
      best = c;
      best_t = t;
    }
  }
  return best;
}

VerificationReport run_condition(const MinkowskiGrid& grid, const Instance& inst,
                                 const ConditionSpec& spec) {
  const FiniteCausalSpace& space = grid.space();
  const DiscreteMeasure mu0 = uniform_measure(space, inst.A);
  const DiscreteMeasure mu1 = uniform_measure(space, inst.B);

  switch (spec.kind) {
    case ConditionKind::TBM: {
      VerificationReport report;
      report.kind = "tbm";
      for (double t : spec.t_grid)
        report.merge(verify_tbm(grid, inst.A, inst.B, t, spec.K, spec.N, nullptr,
                                TbmVariant::TBM, spec.tol));
      return report;
    }
    case ConditionKind::STBM:
    case ConditionKind::STBMStar: {
      const LqResult solved = solve_lq(mu0, mu1, spec.q);
      if (!solved.coupling.feasible)
        throw NotTotallyTimelikeError("stbm: no admissible causal coupling");
      const TransportPlan plan{solved.coupling, &grid};
      const TbmVariant variant =
          spec.kind == ConditionKind::STBM ? TbmVariant::STBM : TbmVariant::STBMStar;
      VerificationReport report;
      report.kind = to_string(spec.kind);
      for (double t : spec.t_grid)
        report.merge(
            verify_tbm(grid, inst.A, inst.B, t, spec.K, spec.N, &plan, variant, spec.tol));
      return report;
    }
    case ConditionKind::TCD:
    case ConditionKind::TCDe: {
      const LqResult solved = solve_lq(mu0, mu1, spec.q);
      if (!solved.coupling.feasible)
        throw NotTotallyTimelikeError("tcd: no admissible causal coupling");
      const TransportPlan plan{solved.coupling, &grid};
      if (spec.kind == ConditionKind::TCD)
        return verify_tcd(mu0, mu1, plan, spec.K, spec.N, spec.Nprime_grid, spec.t_grid,
                          spec.tol);
      return verify_tcd_e(mu0, mu1, plan, spec.K, spec.N, spec.t_grid, spec.tol);
    }
    case ConditionKind::TMCP:
    case ConditionKind::TMCPe: {
      const int x0 = contraction_target(grid, inst.B);
      const TmcpVariant variant =
          spec.kind == ConditionKind::TMCP ? TmcpVariant::TMCP : TmcpVariant::TMCPe;
      return verify_tmcp(mu0, x0, grid, spec.K, spec.N, variant, spec.t_grid,
                         spec.Nprime_grid, spec.tol);
    }
  }
  throw Error("run_condition: unreachable");
}

struct FamilyKey {
  std::string kind;
  double K, N, q;

  bool operator<(const FamilyKey& o) const {
    const auto key = [](const FamilyKey& f) {
      const auto num = [](double v) { return std::isnan(v) ? -1e300 : v; };
      return std::make_tuple(f.kind, num(f.K), num(f.N), num(f.q));
    };
    return key(*this) < key(o);
  }
};

// Richardson pass: calibrate C on the coarse grid per condition family, then
// re-judge every finite row with tol = 1.5 C h at its own resolution.
void apply_richardson(std::vector<ReportRow>& rows, int coarse_res,
                      const std::map<int, double>& h_of_res,
                      std::vector<std::string>& notes) {
  std::map<FamilyKey, double> defect;
  for (const ReportRow& row : rows) {
    if (!row.resolution || *row.resolution != coarse_res) continue;
    if (!std::isfinite(row.margin)) continue;
    FamilyKey key{row.kind, row.K, row.N, row.q};
    double& d = defect.try_emplace(key, 0.0).first->second;
    d = std::max(d, -row.margin);
  }

  const double h_coarse = h_of_res.at(coarse_res);
  std::map<FamilyKey, double> c_hat;
  for (const auto& [key, d] : defect) {
    c_hat[key] = d / h_coarse;
    notes.push_back("richardson " + key.kind + ": C=" + format_double(c_hat[key]) +
                    " from h=" + format_double(h_coarse));
  }

  for (ReportRow& row : rows) {
    if (!row.resolution) continue;
    const auto it = c_hat.find(FamilyKey{row.kind, row.K, row.N, row.q});
    if (it == c_hat.end()) continue;
    if (!std::isfinite(row.margin)) continue;  // DomainBlowup rows stay failed
    const double tol = std::max(1.5 * it->second * h_of_res.at(*row.resolution), 1e-9);
    row.pass = row.margin >= -tol;
    row.reason = row.pass ? "" : "violation";
  }
}

}  // namespace

VerifyResult run_verify(const ExperimentConfig& cfg) {
  VerifyResult result;
  if (cfg.conditions.empty()) throw ConfigError("verify: no conditions configured");
  if (!cfg.space.grid)
    throw ConfigError(
        "verify: conditions need grid geometry; file spaces support solve-lq only");

  std::vector<int> resolutions = cfg.resolutions;
  if (resolutions.empty()) resolutions = {cfg.space.grid->resolution};
  if (cfg.tol_model == TolModel::Richardson) {
    if (resolutions.size() != 2 || resolutions[0] >= resolutions[1] ||
        resolutions[1] % resolutions[0] != 0)
      throw ConfigError(
          "verify: richardson needs resolutions [coarse, fine] with fine a multiple "
          "of coarse");
  }

  const int lattice_res = *std::min_element(resolutions.begin(), resolutions.end());
  const auto placements =
      draw_placements(cfg.pair, lattice_res, cfg.space.grid->axes(), cfg.seed);

  std::map<int, double> h_of_res;
  for (int res : resolutions) {
    GridSpec spec = *cfg.space.grid;
    spec.resolution = res;
    spec.validate();
    h_of_res[res] = spec.max_cell_edge();
    if (res % lattice_res != 0)
      throw ConfigError("verify: resolutions must be nested multiples of the coarsest");

    const MinkowskiGrid grid = grid_sample(spec);
    const auto instances =
        build_instances(grid, cfg.pair, grid.space(), placements, res / lattice_res);

    for (const Instance& inst : instances) {
      for (const ConditionSpec& cond : cfg.conditions) {
        VerificationReport report = run_condition(grid, inst, cond);
        for (ReportRow& row : report.rows) {
          row.resolution = res;
          row.seed = cfg.seed;
          result.rows.push_back(std::move(row));
        }
        for (std::string& note : report.notes) result.notes.push_back(std::move(note));
      }
    }
  }

  if (cfg.tol_model == TolModel::Richardson)
    apply_richardson(result.rows, resolutions.front(), h_of_res, result.notes);

  sort_rows(result.rows);
  for (const ReportRow& row : result.rows) result.all_pass = result.all_pass && row.pass;
  return result;
}

std::string rows_to_csv(std::span<const ReportRow> rows) {
  std::string out = csv_header();
  out += '\n';
  for (const ReportRow& row : rows) {
    out += csv_row(row);
    out += '\n';
  }
  return out;
}

ReportRow row_from_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  if (fields.size() != 13) throw Error("report row: expected 13 CSV fields");

  const auto num = [](const std::string& s) -> double {
    if (s.empty()) return NAN;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
  };

  ReportRow row;
  row.kind = fields[0];
  row.K = num(fields[1]);
  row.N = num(fields[2]);
  row.q = num(fields[3]);
  row.t = num(fields[4]);
  row.Nprime = num(fields[5]);
  row.lhs = num(fields[6]);
  row.rhs = num(fields[7]);
  row.margin = num(fields[8]);
  row.pass = fields[9] == "1";
  row.reason = fields[10];
  if (!fields[11].empty()) row.resolution = std::stoi(fields[11]);
  if (!fields[12].empty()) row.seed = std::stoull(fields[12]);
  return row;
}

}  // namespace lot
