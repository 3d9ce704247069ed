#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "hypb/cli.hpp"
#include "hypb/io.hpp"
#include "tests/common.hpp"

using namespace hypb;
namespace fs = std::filesystem;

namespace {

// fresh scratch directory per test case, removed on destruction
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("hypb_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("shortest round-trip double formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -4.8989794855642685, 0.0}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(std::nan("")) == "nan");
  CHECK(io::format_double(HUGE_VAL) == "inf");
  CHECK(io::format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("csv quoting rules") {
  CHECK(io::csv_field("plain") == "plain");
  CHECK(io::csv_field("with,comma") == "\"with,comma\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_field("line\nbreak") == "\"line\nbreak\"");
  CHECK(io::csv_field("") == "");
}

TEST_CASE("csv writer enforces rectangular tables") {
  TempDir tmp("csv");
  io::CsvTable table;
  table.header = {"a", "b"};
  table.rows = {{"1", "2"}, {"3"}};
  CHECK_THROWS_AS(io::write_csv(tmp.path / "bad.csv", table),
                  std::runtime_error);
  table.rows = {{"1", "2"}};
  io::write_csv(tmp.path / "ok.csv", table);
  CHECK(slurp(tmp.path / "ok.csv") == "a,b\n1,2\n");
}

TEST_CASE("json round trips for the small schemas") {
  const ModelParams params{3, 2.5, 0.5};
  const ModelParams back = io::params_from_json(io::params_json(params));
  CHECK(back.dim == 3);
  CHECK(back.p == 2.5);
  CHECK(back.lambda == 0.5);

  QuadratureSpec spec;
  spec.rho_max = 33.0;
  spec.n_radial = 256;
  const QuadratureSpec spec_back =
      io::quadrature_from_json(io::quadrature_json(spec));
  CHECK(spec_back.rho_max == 33.0);
  CHECK(spec_back.n_radial == 256);
  CHECK(spec_back.rule == spec.rule);
  // partial documents override only the mentioned fields of the base
  const QuadratureSpec merged =
      io::quadrature_from_json(io::json{{"n_angular", 48}}, spec);
  CHECK(merged.n_angular == 48);
  CHECK(merged.rho_max == 33.0);

  const auto a = CoefficientField::exp_defect(0.25, 6.0);
  const io::json a_doc = io::coefficient_json(a);
  CHECK(a_doc.at("kind") == "exp_defect");
  const auto a_back = io::coefficient_from_json(a_doc);
  CHECK(a_back.kind() == CoefficientField::Kind::ExpDefect);
  CHECK(a_back.C() == 0.25);
  CHECK(a_back.delta() == 6.0);
  const auto unit_back =
      io::coefficient_from_json(io::coefficient_json(CoefficientField::unit()));
  CHECK(unit_back.is_unit());
}

TEST_CASE("profile save and load round trip") {
  TempDir tmp("profile");
  const auto& W = *testing::ground_state_330();
  io::save_profile(W, tmp.path / "profile.csv", tmp.path / "profile.json");
  const RadialProfile back =
      io::load_profile(tmp.path / "profile.csv", tmp.path / "profile.json");
  CHECK(back.w0() == W.w0());
  CHECK(back.grid_size() == W.grid_size());
  CHECK(back.tail_exponent() == W.tail_exponent());
  CHECK(back.params().p == W.params().p);
  // node values survive exactly (shortest round-trip formatting)
  for (std::size_t i = 0; i < W.grid_size(); i += 97)
    CHECK(back.values()[i] == W.values()[i]);
  // between nodes the finite-difference derivatives cost O(step^3)
  CHECK(back.value(1.2345) == doctest::Approx(W.value(1.2345)).epsilon(1e-8));
  // the header documents the solve; the loader keeps the numbers readable
  const io::json header = io::read_json(tmp.path / "profile.json");
  CHECK(header.at("diagnostics").at("residual_sup").get<double>() ==
        W.diagnostics().residual_sup);
  CHECK(header.at("w0").get<double>() == W.w0());
}

TEST_CASE("run config parsing accepts the documented schema") {
  io::json doc{{"schema_version", 1},
               {"seed", 9},
               {"threads", 2},
               {"output_dir", "scratch"},
               {"params", {{"dim", 3}, {"p", 3.0}, {"lambda", 0.0}}},
               {"coefficient",
                {{"kind", "exp_defect"}, {"amplitude", 0.5}, {"rate", 3.5}}},
               {"lemma_sweep",
                {{"center_rhos", {10.0}},
                 {"separations", {8.0}},
                 {"t_step", 0.25}}}};
  RunConfig cfg = run_config_from_json(doc);
  CHECK(cfg.seed == 9);
  CHECK(cfg.threads == 2);
  CHECK(cfg.output_dir == fs::path("scratch"));
  CHECK(cfg.coefficient.delta() == 3.5);
  REQUIRE(cfg.sweep.t_grid.size() == 5);
  CHECK(cfg.sweep.t_grid[1] == doctest::Approx(0.25));
  cfg.finalize();
  CHECK(cfg.sweep.params.p == 3.0);
  CHECK(cfg.sweep.a.delta() == 3.5);
  // the full echo parses back to the same document
  const io::json echo = run_config_json(cfg);
  const RunConfig cfg2 = run_config_from_json(echo);
  CHECK(run_config_json(cfg2) == echo);
}

TEST_CASE("run config parsing rejects malformed input") {
  CHECK_THROWS_AS(run_config_from_json(io::json{{"seed", 1}}), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(io::json{{"schema_version", 2}}),
                  ConfigError);
  CHECK_THROWS_AS(
      run_config_from_json(io::json{{"schema_version", 1}, {"sede", 1}}),
      ConfigError);
  CHECK_THROWS_AS(
      run_config_from_json(io::json{{"schema_version", 1},
                                    {"rng", "mt19937"}}),
      ConfigError);
  CHECK_THROWS_AS(run_config_from_json(
                      io::json{{"schema_version", 1},
                               {"lemma_sweep", {{"t_step", 0.3}}}}),
                  ConfigError);
  CHECK_THROWS_AS(run_config_from_json(
                      io::json{{"schema_version", 1},
                               {"params", {{"dim", 3}, {"p", 3.0},
                                           {"lambda", 5.0}}}}),
                  ConfigError);
}

TEST_CASE("uniform t grids") {
  const auto grid = uniform_t_grid(0.1);
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  CHECK(grid[4] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(uniform_t_grid(0.3), ConfigError);
  CHECK_THROWS_AS(uniform_t_grid(0.0), ConfigError);
}

TEST_CASE("run_command dispatch and artifact sanity") {
  TempDir tmp("cli");
  RunConfig cfg = default_run_config();
  cfg.output_dir = tmp.path / "energy";
  std::ostringstream log;
  CHECK(run_command("no-such-thing", cfg, log) == 2);
  REQUIRE(run_command("energy", cfg, log) == 0);
  const io::json doc = io::read_json(tmp.path / "energy" / "energy.json");
  CHECK(doc.at("schema_version") == io::kSchemaVersion);
  CHECK(doc.at("levels").at("S2").get<double>() ==
        doctest::Approx(12.731169105051318).epsilon(1e-9));
  CHECK(doc.at("report").at("J").get<double>() > 0.0);
  CHECK(doc.at("params").at("p").get<double>() == 3.0);
}

TEST_CASE("identical seeds give byte-identical artifacts") {
  TempDir tmp("det");
  RunConfig cfg = default_run_config();
  cfg.spectrum.random_count = 10;
  std::ostringstream log;
  for (const char* run : {"run1", "run2"}) {
    cfg.output_dir = tmp.path / run;
    REQUIRE(run_command("spectrum", cfg, log) == 0);
  }
  CHECK(slurp(tmp.path / "run1" / "spectrum.csv") ==
        slurp(tmp.path / "run2" / "spectrum.csv"));
  CHECK(slurp(tmp.path / "run1" / "spectrum.json") ==
        slurp(tmp.path / "run2" / "spectrum.json"));
  // a different seed moves the random quotients
  cfg.seed = 2;
  cfg.output_dir = tmp.path / "run3";
  REQUIRE(run_command("spectrum", cfg, log) == 0);
  CHECK(slurp(tmp.path / "run1" / "spectrum.csv") !=
        slurp(tmp.path / "run3" / "spectrum.csv"));
}
