#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "lot/errors.hpp"
#include "lot/experiment.hpp"
#include "lot/io.hpp"
#include "lot/transport.hpp"

using namespace lot;
namespace fs = std::filesystem;

namespace {

// Runs a command, captures stdout, returns the exit code.
int run(const std::string& cmd, std::string* output = nullptr) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::string captured;
  while (fgets(buf, sizeof(buf), pipe) != nullptr) captured += buf;
  const int status = pclose(pipe);
  if (output != nullptr) *output = captured;
  return WEXITSTATUS(status);
}

const char* cli_path() { return std::getenv("LOT_CLI"); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lot_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("space JSON round trip with -inf entries") {
  GridSpec spec;
  spec.bounds = {{0.0, 2.0}, {-1.0, 1.0}};
  spec.resolution = 4;
  const MinkowskiGrid grid = grid_sample(spec);

  const nlohmann::json j = space_to_json(grid.space());
  const FiniteCausalSpace back = space_from_json(j);
  REQUIRE(back.size() == grid.space().size());
  for (int i = 0; i < back.size(); ++i) {
    CHECK(back.ref_mass(i) == grid.space().ref_mass(i));
    for (int k = 0; k < back.size(); ++k)
      CHECK(back.ell(i, k).value() == grid.space().ell(i, k).value());
  }

  SUBCASE("bad entries are rejected") {
    nlohmann::json broken = j;
    broken["ell"][0][1] = "+inf";
    CHECK_THROWS_AS(space_from_json(broken), ConfigError);
    nlohmann::json unknown = j;
    unknown["extra"] = 1;
    CHECK_THROWS_AS(space_from_json(unknown), ConfigError);
  }
}

TEST_CASE("measure and coupling serialization") {
  GridSpec spec;
  spec.bounds = {{0.0, 2.0}, {-1.0, 1.0}};
  spec.resolution = 3;
  const MinkowskiGrid grid = grid_sample(spec);
  const DiscreteMeasure mu = DiscreteMeasure::dirac(grid.space(), 1);

  const DiscreteMeasure back = measure_from_json(grid.space(), measure_to_json(mu));
  CHECK(back.weight(1) == 1.0);

  Coupling cp;
  cp.rows = {1};
  cp.cols = {7};
  cp.pi = {1.0};
  cp.cost = {1.0};
  cp.feasible = true;
  cp.objective = TimeValue::finite(1.0);
  const nlohmann::json j = coupling_to_json(cp);
  REQUIRE(j.at("entries").size() == 1);
  CHECK(j.at("entries")[0][0] == 1);
  CHECK(j.at("entries")[0][1] == 7);
}

TEST_CASE("config parsing") {
  const nlohmann::json good = {
      {"schema", 1},
      {"space", {{"type", "grid"}, {"bounds", {{0.0, 4.0}, {-1.0, 1.0}}}, {"resolution", 8}}},
      {"pair",
       {{"type", "uniform_boxes"},
        {"A", {{0.0, 0.5}, {-0.25, 0.25}}},
        {"B", {{3.5, 4.0}, {-0.25, 0.25}}}}},
      {"conditions", {{{"kind", "tbm"}, {"K", 0.0}, {"N", 2.0}}}},
      {"seed", 7},
      {"resolutions", {8, 16}},
      {"tol_model", "richardson"}};

  const ExperimentConfig cfg = config_from_json(good);
  CHECK(cfg.seed == 7);
  REQUIRE(cfg.space.grid);
  CHECK(cfg.space.grid->resolution == 8);
  REQUIRE(cfg.conditions.size() == 1);
  CHECK(cfg.conditions[0].t_grid == default_t_grid());

  SUBCASE("unknown fields are rejected with their path") {
    nlohmann::json bad = good;
    bad["surprise"] = true;
    CHECK_THROWS_WITH_AS(config_from_json(bad), "config: unknown field 'surprise'",
                         ConfigError);
  }
  SUBCASE("malformed bounds name the field") {
    nlohmann::json bad = good;
    bad["space"]["bounds"] = {{0.0}};
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  }
  SUBCASE("schema is mandatory") {
    nlohmann::json bad = good;
    bad.erase("schema");
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  }
  SUBCASE("conditions validate their grids") {
    nlohmann::json bad = good;
    bad["conditions"][0]["Nprime_grid"] = {1.5};
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  }
}

TEST_CASE("report row CSV round trip") {
  ReportRow row;
  row.kind = "tbm";
  row.K = 0.0;
  row.N = 2.0;
  row.t = 0.5;
  row.lhs = 0.25;
  row.rhs = 0.24;
  row.margin = 0.01;
  row.pass = true;
  row.resolution = 16;
  row.seed = 99;
  const ReportRow back = row_from_csv(csv_row(row));
  CHECK(back.kind == row.kind);
  CHECK(back.t == row.t);
  CHECK(std::isnan(back.q));
  CHECK(back.pass);
  CHECK(back.resolution == 16);
  CHECK(back.seed == 99);
}

TEST_CASE("cli end to end" * doctest::skip(false)) {
  const char* cli = cli_path();
  if (cli == nullptr) {
    MESSAGE("LOT_CLI not set; skipping process-level checks");
    return;
  }
  const fs::path dir = fresh_dir("cli");

  const nlohmann::json config = {
      {"schema", 1},
      {"space", {{"type", "grid"}, {"bounds", {{0.0, 4.0}, {-1.0, 1.0}}}, {"resolution", 8}}},
      {"pair",
       {{"type", "uniform_boxes"},
        {"A", {{0.0, 1.0}, {-0.5, 0.5}}},
        {"B", {{3.0, 4.0}, {-0.5, 0.5}}}}},
      {"conditions",
       {{{"kind", "tbm"}, {"K", 0.0}, {"N", 2.0}},
        {{"kind", "tcd_e"}, {"K", 0.0}, {"N", 2.0}}}},
      {"seed", 11},
      {"resolutions", {8, 16}},
      {"tol_model", "richardson"}};
  write_text_file(dir / "config.json", config.dump(2));

  SUBCASE("gen writes a loadable space") {
    const int code = run(std::string(cli) + " gen --config " + (dir / "config.json").string() +
                         " --out " + dir.string());
    CHECK(code == 0);
    const FiniteCausalSpace space = space_from_json(
        nlohmann::json::parse(read_text_file(dir / "space.json")));
    CHECK(space.size() == 64);
  }

  SUBCASE("solve-lq prints the separation and writes the certificate") {
    std::string out;
    const int code = run(std::string(cli) + " solve-lq --config " +
                             (dir / "config.json").string() + " --out " + dir.string(),
                         &out);
    CHECK(code == 0);
    const double printed = std::stod(out);
    CHECK(printed > 2.0);  // boxes are ~3 apart in time
    CHECK(fs::exists(dir / "coupling.json"));
    CHECK(fs::exists(dir / "certificate.json"));
  }

  SUBCASE("solve-lq through a space file reproduces the worked 2x2 value") {
    // Sources {0,1}, targets {2,3}, cross separations [[2,1],[1,2]]:
    // the diagonal coupling wins with objective sqrt(2), lq = 2.
    std::vector<TimeValue> ell(16, TimeValue::unrelated());
    for (int i = 0; i < 4; ++i) ell[static_cast<std::size_t>(i) * 4 + i] = TimeValue::finite(0);
    ell[0 * 4 + 2] = TimeValue::finite(2);
    ell[0 * 4 + 3] = TimeValue::finite(1);
    ell[1 * 4 + 2] = TimeValue::finite(1);
    ell[1 * 4 + 3] = TimeValue::finite(2);
    const FiniteCausalSpace space(4, std::move(ell), {1, 1, 1, 1});
    write_text_file(dir / "tiny_space.json", space_to_json(space).dump());
    write_text_file(dir / "mu0.json", nlohmann::json{{"weights", {0.5, 0.5, 0.0, 0.0}}}.dump());
    write_text_file(dir / "mu1.json", nlohmann::json{{"weights", {0.0, 0.0, 0.5, 0.5}}}.dump());
    const nlohmann::json cfg = {
        {"schema", 1},
        {"space", {{"type", "file"}, {"path", (dir / "tiny_space.json").string()}}},
        {"pair",
         {{"type", "density_file"},
          {"mu0", (dir / "mu0.json").string()},
          {"mu1", (dir / "mu1.json").string()}}},
        {"seed", 1},
        {"q", 0.5}};
    write_text_file(dir / "tiny.json", cfg.dump());
    std::string out;
    const int code = run(std::string(cli) + " solve-lq --config " +
                             (dir / "tiny.json").string() + " --out " + dir.string(),
                         &out);
    CHECK(code == 0);
    CHECK(std::stod(out) == doctest::Approx(2.0).epsilon(1e-9));
    const nlohmann::json coupling =
        nlohmann::json::parse(read_text_file(dir / "coupling.json"));
    REQUIRE(coupling.at("entries").size() == 2);  // the diagonal
  }

  SUBCASE("solve-lq prints -inf for an all-spacelike pair") {
    nlohmann::json cfg = config;
    cfg["pair"] = {{"type", "uniform_boxes"},
                   {"A", {{0.0, 0.5}, {-1.0, -0.75}}},
                   {"B", {{0.0, 0.5}, {0.75, 1.0}}}};
    write_text_file(dir / "spacelike.json", cfg.dump());
    std::string out;
    const int code = run(std::string(cli) + " solve-lq --config " +
                             (dir / "spacelike.json").string() + " --out " + dir.string(),
                         &out);
    CHECK(code == 0);
    CHECK(out.substr(0, 4) == "-inf");
  }

  SUBCASE("verify exit codes and determinism") {
    std::string out;
    const std::string base = std::string(cli) + " verify --config " +
                             (dir / "config.json").string();
    CHECK(run(base + " --out " + (dir / "r1").string(), &out) == 0);
    CHECK(run(base + " --out " + (dir / "r2").string(), &out) == 0);
    CHECK(read_text_file(dir / "r1" / "report.csv") ==
          read_text_file(dir / "r2" / "report.csv"));

    // Different seed still passes but may differ; a K = 10 run must fail.
    nlohmann::json failing = config;
    failing["conditions"] = {{{"kind", "tbm"}, {"K", 10.0}, {"N", 2.0}}};
    write_text_file(dir / "failing.json", failing.dump());
    CHECK(run(std::string(cli) + " verify --config " + (dir / "failing.json").string() +
                  " --out " + (dir / "rf").string(),
              &out) == 1);

    // Missing space file: config error.
    nlohmann::json missing = config;
    missing["space"] = {{"type", "file"}, {"path", (dir / "nope.json").string()}};
    write_text_file(dir / "missing.json", missing.dump());
    CHECK(run(std::string(cli) + " verify --config " + (dir / "missing.json").string() +
                  " --out " + (dir / "rm").string(),
              &out) == 2);
  }

  SUBCASE("report-merge is sorted and stable") {
    const std::string base = std::string(cli) + " verify --config " +
                             (dir / "config.json").string();
    REQUIRE(run(base + " --out " + (dir / "m1").string()) == 0);
    REQUIRE(run(base + " --out " + (dir / "m2").string()) == 0);
    const int code = run(std::string(cli) + " report-merge " +
                         (dir / "m1" / "report.csv").string() + " " +
                         (dir / "m2" / "report.csv").string() + " --out " +
                         (dir / "merged.csv").string());
    CHECK(code == 0);
    const std::string merged = read_text_file(dir / "merged.csv");
    CHECK(merged.find(csv_header()) == 0);
    // Twice the rows of a single run.
    const std::string single = read_text_file(dir / "m1" / "report.csv");
    auto count_lines = [](const std::string& s) {
      return std::count(s.begin(), s.end(), '\n');
    };
    CHECK(count_lines(merged) == 2 * count_lines(single) - 1);
  }
}
