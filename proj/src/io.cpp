#include "lot/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lot/errors.hpp"

namespace lot {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

json ell_value_to_json(TimeValue v) {
  if (!v.related()) return json("-inf");
  return json(v.value());
}

TimeValue ell_value_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return TimeValue::unrelated();
    throw ConfigError(where + ": only \"-inf\" is accepted as a string entry");
  }
  if (!j.is_number()) throw ConfigError(where + ": ell entries must be numbers or \"-inf\"");
  return TimeValue::finite(j.get<double>());
}

}  // namespace

nlohmann::json space_to_json(const FiniteCausalSpace& space) {
  json ell = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < space.size(); ++j) row.push_back(ell_value_to_json(space.ell(i, j)));
    ell.push_back(std::move(row));
  }
  json labels = json::array();
  for (const std::string& label : space.labels()) labels.push_back(label);
  return json{{"n", space.size()},
              {"ell", std::move(ell)},
              {"ref_mass", space.ref_masses()},
              {"labels", std::move(labels)}};
}

FiniteCausalSpace space_from_json(const nlohmann::json& j) {
  require_keys(j, "space", {"n", "ell", "ref_mass", "labels"});
  if (!j.contains("n") || !j.contains("ell") || !j.contains("ref_mass"))
    throw ConfigError("space: fields n, ell, ref_mass are required");
  const int n = j.at("n").get<int>();
  if (n <= 0) throw ConfigError("space: n must be positive");
  const json& ell_rows = j.at("ell");
  if (!ell_rows.is_array() || ell_rows.size() != static_cast<std::size_t>(n))
    throw ConfigError("space: ell must be an n x n array");
  std::vector<TimeValue> ell;
  ell.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const json& row = ell_rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw ConfigError("space: ell row " + std::to_string(i) + " must have n entries");
    for (int k = 0; k < n; ++k)
      ell.push_back(ell_value_from_json(row[static_cast<std::size_t>(k)],
                                        "space: ell[" + std::to_string(i) + "][" +
                                            std::to_string(k) + "]"));
  }
  std::vector<double> ref_mass = j.at("ref_mass").get<std::vector<double>>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return FiniteCausalSpace(n, std::move(ell), std::move(ref_mass), std::move(labels));
}

nlohmann::json measure_to_json(const DiscreteMeasure& mu) {
  return json{{"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const FiniteCausalSpace& space, const nlohmann::json& j) {
  require_keys(j, "measure", {"weights"});
  if (!j.contains("weights")) throw ConfigError("measure: field weights is required");
  return DiscreteMeasure(space, j.at("weights").get<std::vector<double>>());
}

nlohmann::json coupling_to_json(const Coupling& coupling) {
  json entries = json::array();
  for (const auto& [r, c, m] : coupling.entries(0.0))
    entries.push_back(json::array({r, c, m}));
  return json{{"entries", std::move(entries)},
              {"q", coupling.q},
              {"feasible", coupling.feasible},
              {"objective", coupling.feasible || coupling.objective.related()
                                ? json(coupling.objective.value())
                                : json("-inf")}};
}

nlohmann::json certificate_to_json(const DualCertificate& cert) {
  return json{{"u", cert.u},
              {"v", cert.v},
              {"feasibility_residual", cert.feasibility_residual},
              {"slackness_residual", cert.slackness_residual},
              {"valid", cert.valid}};
}

namespace {

json double_or_null(double v) {
  if (std::isnan(v)) return json(nullptr);
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

}  // namespace

nlohmann::json report_row_to_json(const ReportRow& row) {
  json params{{"K", double_or_null(row.K)},
              {"N", double_or_null(row.N)},
              {"q", double_or_null(row.q)},
              {"t", double_or_null(row.t)},
              {"Nprime", double_or_null(row.Nprime)}};
  json j{{"kind", row.kind},
         {"params", std::move(params)},
         {"lhs", double_or_null(row.lhs)},
         {"rhs", double_or_null(row.rhs)},
         {"pass", row.pass},
         {"margin", double_or_null(row.margin)},
         {"reason", row.reason}};
  if (row.resolution) j["resolution"] = *row.resolution;
  if (row.seed) j["seed"] = *row.seed;
  return j;
}

nlohmann::json report_rows_to_json(const std::vector<ReportRow>& rows) {
  json out = json::array();
  for (const ReportRow& row : rows) out.push_back(report_row_to_json(row));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

namespace {

GridSpec grid_spec_from_json(const json& j) {
  require_keys(j, "space.grid", {"bounds", "resolution"});
  if (!j.contains("bounds") || !j.contains("resolution"))
    throw ConfigError("space.grid: fields bounds and resolution are required");
  GridSpec spec;
  const json& bounds = j.at("bounds");
  if (!bounds.is_array() || bounds.empty())
    throw ConfigError("space.grid.bounds: expected a nonempty array of [lo, hi] pairs");
  for (std::size_t a = 0; a < bounds.size(); ++a) {
    const json& b = bounds[a];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      throw ConfigError("space.grid.bounds[" + std::to_string(a) +
                        "]: expected [lo, hi] numbers");
    spec.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  spec.resolution = j.at("resolution").get<int>();
  spec.validate();
  return spec;
}

std::vector<std::array<double, 2>> box_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected [[lo,hi],...]");
  std::vector<std::array<double, 2>> out;
  for (const json& b : j) {
    if (!b.is_array() || b.size() != 2)
      throw ConfigError(where + ": each axis needs [lo, hi]");
    out.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  return out;
}

PairSpec pair_from_json(const json& j) {
  require_keys(j, "pair", {"type", "A", "B", "mu0", "mu1", "box_cells", "placements"});
  PairSpec pair;
  const std::string type = j.value("type", std::string("uniform_boxes"));
  if (type == "uniform_boxes") {
    pair.type = PairSpec::Type::UniformBoxes;
    if (!j.contains("A") || !j.contains("B"))
      throw ConfigError("pair: uniform_boxes needs A and B boxes");
    pair.box_a = box_from_json(j.at("A"), "pair.A");
    pair.box_b = box_from_json(j.at("B"), "pair.B");
  } else if (type == "density_file") {
    pair.type = PairSpec::Type::DensityFile;
    if (!j.contains("mu0") || !j.contains("mu1"))
      throw ConfigError("pair: density_file needs mu0 and mu1 paths");
    pair.mu0_file = j.at("mu0").get<std::string>();
    pair.mu1_file = j.at("mu1").get<std::string>();
  } else if (type == "random_boxes") {
    pair.type = PairSpec::Type::RandomBoxes;
    pair.box_cells = j.value("box_cells", 4);
    pair.placements = j.value("placements", 1);
    if (pair.box_cells < 1 || pair.placements < 1)
      throw ConfigError("pair: box_cells and placements must be >= 1");
  } else {
    throw ConfigError("pair.type: unknown type '" + type + "'");
  }
  return pair;
}

ConditionSpec condition_from_json(const json& j, const std::string& where) {
  require_keys(j, where, {"kind", "K", "N", "q", "t_grid", "Nprime_grid", "tol"});
  if (!j.contains("kind")) throw ConfigError(where + ": field kind is required");
  ConditionSpec spec;
  spec.kind = condition_kind_from_string(j.at("kind").get<std::string>());
  spec.K = j.value("K", 0.0);
  spec.N = j.value("N", 2.0);
  spec.q = j.value("q", 0.5);
  if (j.contains("t_grid")) spec.t_grid = j.at("t_grid").get<std::vector<double>>();
  if (j.contains("Nprime_grid"))
    spec.Nprime_grid = j.at("Nprime_grid").get<std::vector<double>>();
  spec.tol = j.value("tol", 0.0);
  spec.apply_defaults();
  spec.validate();
  return spec;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  require_keys(j, "config",
               {"schema", "space", "pair", "conditions", "seed", "resolutions",
                "tol_model", "q"});
  if (!j.contains("schema")) throw ConfigError("config: field schema is required");
  ExperimentConfig cfg;
  cfg.schema = j.at("schema").get<int>();
  if (cfg.schema != 1)
    throw ConfigError("config: unsupported schema version " + std::to_string(cfg.schema));

  if (!j.contains("space")) throw ConfigError("config: field space is required");
  const json& space = j.at("space");
  require_keys(space, "space", {"type", "bounds", "resolution", "path"});
  const std::string stype = space.value("type", std::string("grid"));
  if (stype == "grid") {
    json grid;
    if (space.contains("bounds")) grid["bounds"] = space.at("bounds");
    if (space.contains("resolution")) grid["resolution"] = space.at("resolution");
    cfg.space.grid = grid_spec_from_json(grid);
  } else if (stype == "file") {
    if (!space.contains("path")) throw ConfigError("space: file source needs a path");
    cfg.space.file = space.at("path").get<std::string>();
  } else {
    throw ConfigError("space.type: unknown type '" + stype + "'");
  }

  if (j.contains("pair")) cfg.pair = pair_from_json(j.at("pair"));
  if (j.contains("conditions")) {
    const json& conditions = j.at("conditions");
    if (!conditions.is_array()) throw ConfigError("conditions: expected an array");
    for (std::size_t i = 0; i < conditions.size(); ++i)
      cfg.conditions.push_back(condition_from_json(
          conditions[i], "conditions[" + std::to_string(i) + "]"));
  }
  cfg.seed = j.value("seed", 0ULL);
  if (j.contains("resolutions")) {
    cfg.resolutions = j.at("resolutions").get<std::vector<int>>();
    for (int r : cfg.resolutions)
      if (r < 1) throw ConfigError("resolutions: entries must be >= 1");
  }
  const std::string model = j.value("tol_model", std::string("richardson"));
  if (model == "richardson")
    cfg.tol_model = TolModel::Richardson;
  else if (model == "fixed")
    cfg.tol_model = TolModel::Fixed;
  else
    throw ConfigError("tol_model: expected 'fixed' or 'richardson'");
  cfg.q = j.value("q", 0.5);
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw ConfigError("q: must be in (0,1)");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace lot
