#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "pxp/errors.hpp"
#include "pxp/manifest.hpp"
#include "pxp/runner.hpp"

using namespace pxp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pxp_test_runner_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

// Every regular file below dir, relative to it.
std::set<std::string> files_below(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), dir).generic_string());
  }
  return out;
}

// Files a manifest accounts for, following nested manifests.
std::set<std::string> referenced(const fs::path& dir) {
  std::ifstream is(dir / "manifest.json");
  const RunManifest m = manifest_from_json(nlohmann::ordered_json::parse(is));
  std::set<std::string> out{"manifest.json"};
  for (const auto& name : m.outputs) {
    const fs::path p(name);
    if (p.filename() == "manifest.json" && p.has_parent_path()) {
      for (const auto& nested : referenced(dir / p.parent_path())) {
        out.insert((p.parent_path() / nested).generic_string());
      }
    } else {
      out.insert(name);
    }
  }
  return out;
}

RunManifest small_run(const std::string& kind, const fs::path& dir) {
  RunManifest m;
  m.kind = kind;
  m.sites = 8;
  m.state = StateKind::neel;
  m.t_max = 2.0;
  m.output_dir = dir.string();
  return m;
}

}  // namespace

TEST_CASE("angle literals") {
  CHECK(parse_angle("pi/4") == std::numbers::pi / 4);
  CHECK(parse_angle("pi") == std::numbers::pi);
  CHECK(parse_angle("-pi/2") == -std::numbers::pi / 2);
  CHECK(parse_angle("3pi/8") == 3 * std::numbers::pi / 8);
  CHECK(parse_angle("3*pi/8") == 3 * std::numbers::pi / 8);
  CHECK(parse_angle("0.25") == 0.25);
  CHECK(parse_angle(" 1e-3 ") == 1e-3);
  CHECK_THROWS_AS(parse_angle("pi/0"), UnsupportedError);
  CHECK_THROWS_AS(parse_angle("pi4"), UnsupportedError);
  CHECK_THROWS_AS(parse_angle("quarter"), UnsupportedError);
  CHECK_THROWS_AS(parse_angle(""), UnsupportedError);
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.kind = "sweep";
  m.sites = 14;
  m.state = StateKind::theta_symm;
  m.theta_literal = "pi/4";
  m.theta = std::numbers::pi / 4;
  m.detuning = -0.3;
  m.dt = 0.1;
  m.method = Method::krylov;
  m.blocks = {1, 3, 7};
  m.sweep_sites = {12, 14};
  m.sweep_thetas = {"pi/4", "pi/8"};
  m.outputs = {"a.csv", "b/manifest.json"};
  m.wall_clock_seconds = 1.0 / 3.0;
  for (const bool with_deg_tol : {false, true}) {
    if (with_deg_tol) m.deg_tol = 1e-9;
    const std::string text = to_json(m).dump(2);
    const RunManifest back = manifest_from_json(nlohmann::ordered_json::parse(text));
    CHECK(back == m);
    CHECK(to_json(back).dump(2) == text);
  }
  CHECK_THROWS_AS(manifest_from_json(nlohmann::ordered_json::parse("{\"kind\": \"evolve\"}")), UnsupportedError);
}

TEST_CASE("evolve writes a referenced time series starting at unit fidelity") {
  const fs::path dir = scratch("evolve");
  RunManifest m = small_run("evolve", dir);
  m.blocks = {2, 4};
  std::ostringstream out, log;
  REQUIRE(run_experiment_status(m, out, log) == exit_code::success);
  CHECK(files_below(dir) == referenced(dir));

  std::ifstream csv(dir / "timeseries.csv");
  std::string header, row0;
  std::getline(csv, header);
  std::getline(csv, row0);
  const auto names = split(header);
  const auto cells = split(row0);
  REQUIRE(names.size() == cells.size());
  CHECK(names[0] == "t");
  CHECK(names[1] == "F_global");
  CHECK(names[6] == "std_F1site");
  CHECK(names.back() == "F_block_l4");
  CHECK(cells[0] == "0");
  CHECK(std::stod(cells[1]) == 1.0);
  CHECK(std::stod(cells[2]) == 1.0);
  std::size_t rows = 1;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 41);

  std::ifstream is(dir / "manifest.json");
  const RunManifest written = manifest_from_json(nlohmann::ordered_json::parse(is));
  CHECK(written == m);
  CHECK(written.theta == 0.0);
}

TEST_CASE("identical manifests give identical bytes") {
  for (const std::string kind : {"evolve", "local", "spectral"}) {
    const fs::path a = scratch(kind + "_a");
    const fs::path b = scratch(kind + "_b");
    RunManifest ma = small_run(kind, a);
    RunManifest mb = small_run(kind, b);
    ma.method = mb.method = Method::krylov;
    std::ostringstream out, log;
    REQUIRE(run_experiment_status(ma, out, log) == exit_code::success);
    REQUIRE(run_experiment_status(mb, out, log) == exit_code::success);
    REQUIRE(ma.outputs == mb.outputs);
    for (const auto& name : ma.outputs) {
      INFO(kind << '/' << name);
      CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(files_below(a) == referenced(a));
  }
}

TEST_CASE("local and spectral outputs") {
  const fs::path dir = scratch("local");
  RunManifest m = small_run("local", dir);
  m.state = StateKind::blockaded;
  std::ostringstream out, log;
  REQUIRE(run_experiment_status(m, out, log) == exit_code::success);
  std::ifstream csv(dir / "sites.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,j,F_j,Dmax_j,Z_j,absdZ_j");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 41 * 8);

  const fs::path sdir = scratch("spectral");
  RunManifest s = small_run("spectral", sdir);
  REQUIRE(run_experiment_status(s, out, log) == exit_code::success);
  std::ifstream js(sdir / "summary.json");
  const auto summary = nlohmann::json::parse(js);
  CHECK(summary.at("longtime_average").get<double>() >= summary.at("scar_bound").get<double>() - 1e-10);
  CHECK(summary.at("n_scars").get<int>() == 9);
  CHECK(files_below(sdir) == referenced(sdir));
}

TEST_CASE("sweep runs one subdirectory per point") {
  const fs::path dir = scratch("sweep");
  RunManifest m = small_run("sweep", dir);
  m.state = StateKind::theta_symm;
  m.sweep_kind = "local";
  m.sweep_sites = {6, 8};
  m.sweep_thetas = {"pi/4", "pi/8"};
  m.jobs = 2;
  std::ostringstream out, log;
  REQUIRE(run_experiment_status(m, out, log) == exit_code::success);
  CHECK(m.outputs.size() == 4);
  CHECK(fs::exists(dir / "L8_theta_pi_8" / "sites.csv"));
  CHECK(files_below(dir) == referenced(dir));

  // Re-running into the same directory replaces the previous run.
  REQUIRE(run_experiment_status(m, out, log) == exit_code::success);
  CHECK(files_below(dir) == referenced(dir));
}

TEST_CASE("failures map to exit codes and leave no partial output") {
  std::ostringstream out, log;

  RunManifest odd = small_run("evolve", scratch("odd"));
  odd.sites = 7;
  odd.state = StateKind::theta_plus;
  CHECK(run_experiment_status(odd, out, log) == exit_code::validation);
  CHECK_FALSE(fs::exists(odd.output_dir));

  RunManifest block = small_run("evolve", scratch("block"));
  block.blocks = {8};
  CHECK(run_experiment_status(block, out, log) == exit_code::validation);

  RunManifest dense = small_run("evolve", scratch("dense"));
  dense.method = Method::exact;
  dense.dense_limit = 10;
  dense.dump_ham = true;
  CHECK(run_experiment_status(dense, out, log) == exit_code::capacity);
  CHECK_FALSE(fs::exists(dense.output_dir));

  RunManifest heavy = small_run("spectral", scratch("heavy"));
  heavy.sites = 18;
  CHECK(run_experiment_status(heavy, out, log) == exit_code::capacity);
  CHECK_FALSE(fs::exists(heavy.output_dir));

  const fs::path foreign = scratch("foreign");
  fs::create_directories(foreign);
  std::ofstream(foreign / "notes.txt") << "keep";
  RunManifest busy = small_run("evolve", foreign);
  CHECK(run_experiment_status(busy, out, log) == exit_code::validation);
  CHECK(slurp(foreign / "notes.txt") == "keep");

  RunManifest sweep = small_run("sweep", scratch("bad_sweep"));
  sweep.sweep_sites = {6, 7};
  sweep.state = StateKind::theta_symm;
  sweep.sweep_thetas = {"pi/4"};
  CHECK(run_experiment_status(sweep, out, log) == exit_code::validation);
  CHECK_FALSE(fs::exists(sweep.output_dir));

  RunManifest kind = small_run("animate", scratch("kind"));
  CHECK(run_experiment_status(kind, out, log) == exit_code::validation);
}

TEST_CASE("basis-info prints and dumps") {
  RunManifest m;
  m.kind = "basis-info";
  m.sites = 3;
  m.dump_basis = true;
  std::ostringstream out, log;
  REQUIRE(run_experiment_status(m, out, log) == exit_code::success);
  CHECK(out.str() == "L=3 dimension=5\n000\n001\n010\n100\n101\n");
}
