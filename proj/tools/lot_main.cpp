#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lot/errors.hpp"
#include "lot/experiment.hpp"
#include "lot/io.hpp"
#include "lot/transport.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

namespace fs = std::filesystem;
using lot::ConfigError;
using lot::ExperimentConfig;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitError = 2;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  std::string tol_model;
};

ExperimentConfig load(const CommonOpts& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = lot::load_config(opts.config_path);
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.tol_model == "fixed") cfg.tol_model = lot::TolModel::Fixed;
  if (opts.tol_model == "richardson") cfg.tol_model = lot::TolModel::Richardson;
#ifdef _OPENMP
  if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
#endif
  return cfg;
}

lot::FiniteCausalSpace load_space(const ExperimentConfig& cfg,
                                  std::optional<lot::MinkowskiGrid>& grid) {
  if (cfg.space.grid) {
    grid.emplace(lot::grid_sample(*cfg.space.grid));
    return grid->space();
  }
  return lot::space_from_json(nlohmann::json::parse(lot::read_text_file(cfg.space.file)));
}

int cmd_gen(const CommonOpts& opts) {
  const ExperimentConfig cfg = load(opts);
  if (!cfg.space.grid) throw ConfigError("gen: config must describe a grid space");
  const lot::MinkowskiGrid grid = lot::grid_sample(*cfg.space.grid);
  const fs::path out = fs::path(opts.out_dir) / "space.json";
  lot::write_text_file(out, lot::space_to_json(grid.space()).dump(2) + "\n");
  std::cout << "wrote " << out.string() << " (" << grid.space().size() << " points)\n";
  return kExitPass;
}

// Builds the configured measure pair on whichever space the config names.
std::pair<lot::DiscreteMeasure, lot::DiscreteMeasure> build_pair(
    const ExperimentConfig& cfg, const lot::FiniteCausalSpace& space,
    const std::optional<lot::MinkowskiGrid>& grid) {
  using Type = lot::PairSpec::Type;
  switch (cfg.pair.type) {
    case Type::DensityFile: {
      auto j0 = nlohmann::json::parse(lot::read_text_file(cfg.pair.mu0_file));
      auto j1 = nlohmann::json::parse(lot::read_text_file(cfg.pair.mu1_file));
      return {lot::measure_from_json(space, j0), lot::measure_from_json(space, j1)};
    }
    case Type::UniformBoxes: {
      if (!grid) throw ConfigError("pair: box pairs need a grid space");
      const auto A = grid->box_cells(cfg.pair.box_a);
      const auto B = grid->box_cells(cfg.pair.box_b);
      if (A.empty() || B.empty()) throw ConfigError("pair: a box contains no grid cells");
      return {lot::uniform_measure(space, A), lot::uniform_measure(space, B)};
    }
    case Type::RandomBoxes: {
      if (!grid) throw ConfigError("pair: box pairs need a grid space");
      lot::Rng rng(cfg.seed);
      lot::Rng stream = rng.fork(1);
      const auto boxes = lot::random_congruent_boxes(grid->spec(), cfg.pair.box_cells, stream);
      return {lot::uniform_measure(space, grid->box_cells(boxes.a)),
              lot::uniform_measure(space, grid->box_cells(boxes.b))};
    }
  }
  throw ConfigError("pair: unreachable");
}

int cmd_solve_lq(const CommonOpts& opts) {
  const ExperimentConfig cfg = load(opts);
  std::optional<lot::MinkowskiGrid> grid;
  const lot::FiniteCausalSpace space = load_space(cfg, grid);
  const auto [mu, nu] = build_pair(cfg, space, grid);

  const lot::LqResult result = lot::solve_lq(mu, nu, cfg.q);
  std::cout << (result.lq.related() ? lot::format_double(result.lq.value()) : "-inf")
            << "\n";

  const fs::path dir(opts.out_dir);
  lot::write_text_file(dir / "coupling.json",
                       lot::coupling_to_json(result.coupling).dump(2) + "\n");
  lot::write_text_file(dir / "certificate.json",
                       lot::certificate_to_json(result.coupling.certificate).dump(2) + "\n");
  return kExitPass;
}

int cmd_verify(const CommonOpts& opts) {
  const ExperimentConfig cfg = load(opts);
  const lot::VerifyResult result = lot::run_verify(cfg);

  const fs::path dir(opts.out_dir);
  lot::write_text_file(dir / "report.csv", lot::rows_to_csv(result.rows));
  nlohmann::json j{{"rows", lot::report_rows_to_json(result.rows)},
                   {"notes", result.notes},
                   {"pass", result.all_pass}};
  lot::write_text_file(dir / "report.json", j.dump(2) + "\n");

  long passed = 0;
  for (const auto& row : result.rows) passed += row.pass ? 1 : 0;
  std::cout << (result.all_pass ? "PASS" : "FAIL") << " " << passed << "/"
            << result.rows.size() << " rows\n";
  return result.all_pass ? kExitPass : kExitVerifyFail;
}

int cmd_report_merge(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<lot::ReportRow> rows;
  for (const std::string& input : inputs) {
    std::istringstream in(lot::read_text_file(input));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first && line == lot::csv_header()) {
        first = false;
        continue;
      }
      first = false;
      rows.push_back(lot::row_from_csv(line));
    }
  }
  lot::sort_rows(rows);
  lot::write_text_file(out_path, lot::rows_to_csv(rows));
  std::cout << "merged " << rows.size() << " rows into " << out_path << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite Lorentzian optimal-transport toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> merge_inputs;
  std::string merge_out = "merged.csv";

  const auto add_common = [&opts](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config JSON");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--jobs", opts.jobs, "worker threads (0 = default)");
    cmd->add_option("--tol-model", opts.tol_model, "fixed or richardson")
        ->check(CLI::IsMember({"fixed", "richardson"}));
  };

  auto* gen = app.add_subcommand("gen", "sample a model spacetime to a space JSON");
  add_common(gen, true);
  auto* solve = app.add_subcommand("solve-lq", "solve the q-cost transport problem");
  add_common(solve, true);
  auto* verify = app.add_subcommand("verify", "run the configured condition verifiers");
  add_common(verify, true);
  auto* merge = app.add_subcommand("report-merge", "merge report CSV files");
  merge->add_option("inputs", merge_inputs, "input CSV files")->required();
  merge->add_option("--out", merge_out, "merged CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;  // usage errors follow the config-error code
  }

  try {
    if (gen->parsed()) return cmd_gen(opts);
    if (solve->parsed()) return cmd_solve_lq(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (merge->parsed()) return cmd_report_merge(merge_inputs, merge_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
