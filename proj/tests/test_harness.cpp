#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fidsim/cli.hpp"
#include "fidsim/config.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/experiment.hpp"

using fidsim::ConfigError;
using fidsim::ExperimentConfig;
using fidsim::SystemKind;

namespace {

namespace fs = std::filesystem;

constexpr const char* kHeader = "time,F,f_real,f_imag,sigma,N,method,D,k,epsilon,n1,seed";

void expect_config_error(const std::function<void()>& fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected ConfigError containing '" << needle << "', nothing was thrown");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CAPTURE(what);
    CHECK(what.find(needle) != std::string::npos);
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

/// Data rows of a run (everything after the header line).
std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  for (const std::string& line : split_lines(text)) {
    if (line == kHeader) {
      seen_header = true;
      continue;
    }
    if (seen_header && !line.empty()) rows.push_back(split_csv(line));
  }
  REQUIRE(seen_header);
  return rows;
}

ExperimentConfig small_rotor(const std::string& method, std::size_t S = 1) {
  ExperimentConfig cfg;
  cfg.system.kind = SystemKind::Rotor;
  cfg.system.dim = 1;
  cfg.system.kick = 0.9;
  cfg.system.epsilon = 0.02;
  cfg.system.n1 = 256;
  cfg.method = method;
  cfg.t_max = 4.0;
  cfg.N = 40;
  cfg.S = S;
  cfg.seed = 5;
  fidsim::resolve_config(cfg);
  return cfg;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "fidsim_harness_tests";
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("fidsim");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return fidsim::cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config text parses every section and key") {
  const std::string text =
      "# comment\n"
      "; also a comment\n"
      "[system]\n"
      "kind = rotor\n"
      "D = 3\n"
      "k = 0.25\n"
      "epsilon = 1e-3\n"
      "n1 = 512\n"
      "\n"
      "[state]\n"
      "q_center = 1.5\n"
      "p_center = 2.5\n"
      "sigma_q = 0.2\n"
      "[run]\n"
      "method = echo-2\n"
      "t_max = 12\n"
      "N = 1e4\n"
      "S = 7\n"
      "seed = 99\n"
      "report_stride = 3\n"
      "workers = 2\n"
      "out = series.csv\n";
  ExperimentConfig cfg = fidsim::parse_config_text(text);
  CHECK(cfg.system.kind == SystemKind::Rotor);
  CHECK(cfg.system.dim == 3);
  CHECK(cfg.system.kick == 0.25);
  CHECK(cfg.system.epsilon == 1e-3);
  CHECK(cfg.system.n1 == 512);
  CHECK(cfg.q_center == 1.5);
  CHECK(cfg.p_center == 2.5);
  CHECK(cfg.sigma_q == 0.2);
  CHECK(cfg.method == "echo-2");
  CHECK(cfg.t_max == 12.0);
  CHECK(cfg.N == 10000);
  CHECK(cfg.S == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.report_stride == 3);
  CHECK(cfg.workers == 2);
  CHECK(cfg.out == "series.csv");
  CHECK(cfg.saw("system.k"));
  CHECK(cfg.saw("run.out"));
  CHECK_FALSE(cfg.saw("system.omega"));
  CHECK_FALSE(cfg.resolved);
  fidsim::resolve_config(cfg);
  CHECK(cfg.resolved);
}

TEST_CASE("unset fields resolve to the documented defaults") {
  ExperimentConfig cfg = fidsim::parse_config_text(
      "[system]\nkind = rotor\nn1 = 64\nk = 0.2\nepsilon = 1e-3\n[run]\nt_max = 5\n");
  fidsim::resolve_config(cfg);
  CHECK(*cfg.q_center == 1.0);
  CHECK(*cfg.p_center == 3.8832220774509332);
  const auto state = fidsim::config_state(cfg);
  CHECK(state.sigma_q[0] ==
        doctest::Approx(std::sqrt(0.5 * cfg.system.hbar())).epsilon(1e-15));
  CHECK(cfg.method == "dr");
  CHECK(cfg.N == 1000);
  CHECK(cfg.S == 1);

  ExperimentConfig sho = fidsim::parse_config_text(
      "[system]\nkind = sho\nepsilon = 0.3\nomega = 2.0\n[run]\nt_max = 1\n");
  fidsim::resolve_config(sho);
  CHECK(*sho.p_center == 0.5);
  const auto sho_state = fidsim::config_state(sho);
  CHECK(sho_state.sigma_q[0] == doctest::Approx(std::sqrt(0.25)).epsilon(1e-15));
}

TEST_CASE("parse errors name the offending input") {
  expect_config_error([] { fidsim::parse_config_text("x = 1\n"); },
                      "before any section");
  expect_config_error([] { fidsim::parse_config_text("[system]\nfrobnicate = 1\n"); },
                      "system.frobnicate");
  expect_config_error([] { fidsim::parse_config_text("[stuff]\n"); }, "[stuff]");
  expect_config_error([] { fidsim::parse_config_text("[system]\nk = banana\n"); },
                      "system.k");
  expect_config_error([] { fidsim::parse_config_text("\n\n[system]\nk 1\n"); }, "line 4");
  expect_config_error([] { fidsim::parse_config_text("[run]\nN = -5\n"); },
                      "non-negative");
  expect_config_error([] { fidsim::parse_config_text("[system\nk = 1\n"); },
                      "malformed section");
}

TEST_CASE("resolution rejects cross-kind and out-of-range settings") {
  auto resolve_text = [](const std::string& text) {
    ExperimentConfig cfg = fidsim::parse_config_text(text);
    fidsim::resolve_config(cfg);
    return cfg;
  };
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 64\nomega = 1\n[run]\nt_max = 1\n"); },
      "system.omega");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 64\nhbar = 1\n[run]\nt_max = 1\n"); },
      "system.hbar");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = sho\nk = 0.2\n[run]\nt_max = 1\n"); },
      "system.k");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = sho\nn1 = 64\n[run]\nt_max = 1\n"); },
      "system.n1");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 100\n[run]\nt_max = 1\n"); },
      "power of two");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 33554432\n[run]\nt_max = 1\n"); },
      "memory budget");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 64\n[run]\nt_max = 2.5\n"); },
      "integer kick count");
  expect_config_error(
      [&] { resolve_text("[system]\nkind = rotor\nn1 = 64\n[run]\nN = 0\n"); }, "run.N");
  expect_config_error(
      [&] {
        resolve_text("[system]\nkind = rotor\nn1 = 64\n[state]\nsigma_q = -0.1\n"
                     "[run]\nt_max = 1\n");
      },
      "sigma_q");
  expect_config_error(
      [&] {
        resolve_text("[system]\nkind = sho\n[run]\nt_max = 1\nmethod = fid-0\n");
      },
      "run.method");
  expect_config_error(
      [&] {
        resolve_text("[system]\nkind = rotor\nn1 = 64\n[run]\nt_max = 1\nmethod = walrus\n");
      },
      "run.method");
}

TEST_CASE("wide torus packets warn without failing") {
  ExperimentConfig cfg = fidsim::parse_config_text(
      "[system]\nkind = rotor\nn1 = 64\n[state]\nsigma_q = 0.8\n[run]\nt_max = 1\n");
  fidsim::resolve_config(cfg);
  REQUIRE_FALSE(cfg.warnings.empty());
  CHECK(cfg.warnings[0].find("sigma_q") != std::string::npos);
}

TEST_CASE("grid-resolution limits apply to the quantum method only") {
  const std::string narrow =
      "[system]\nkind = rotor\nn1 = 64\n[state]\nsigma_q = 0.05\n[run]\nt_max = 1\n";
  ExperimentConfig classical = fidsim::parse_config_text(narrow);
  CHECK_NOTHROW(fidsim::resolve_config(classical));
  expect_config_error(
      [&] {
        ExperimentConfig qm =
            fidsim::parse_config_text(narrow + std::string("method = qm\n"));
        fidsim::resolve_config(qm);
      },
      "grid spacings");
}

TEST_CASE("the quantum method runs a single deterministic series") {
  ExperimentConfig cfg = fidsim::parse_config_text(
      "[system]\nkind = rotor\nn1 = 256\n[run]\nt_max = 4\nmethod = qm\nS = 5\n");
  fidsim::resolve_config(cfg);
  CHECK(cfg.S == 1);
}

TEST_CASE("the manifest echoes every resolved field at full precision") {
  ExperimentConfig cfg = small_rotor("dr");
  const std::string man = fidsim::config_manifest(cfg);
  CHECK(man.find("# system.kind = rotor\n") != std::string::npos);
  CHECK(man.find("# system.D = 1\n") != std::string::npos);
  CHECK(man.find("# system.k = 0.90000000000000002\n") != std::string::npos);
  CHECK(man.find("# system.n1 = 256\n") != std::string::npos);
  CHECK(man.find("# state.p_center = 3.8832220774509332\n") != std::string::npos);
  CHECK(man.find("# run.method = dr\n") != std::string::npos);
  CHECK(man.find("# run.N = 40\n") != std::string::npos);
  CHECK(man.find("# run.dt") == std::string::npos);  // rotor has no dt line
  CHECK(fidsim::config_manifest(cfg) == man);

  ExperimentConfig sho = fidsim::parse_config_text(
      "[system]\nkind = sho\nepsilon = 0.3\nomega = 1.5\n[run]\nt_max = 1\n");
  fidsim::resolve_config(sho);
  const std::string man2 = fidsim::config_manifest(sho);
  CHECK(man2.find("# system.omega = 1.5\n") != std::string::npos);
  CHECK(man2.find("# system.hbar = 1\n") != std::string::npos);
  CHECK(man2.find("# run.dt = ") != std::string::npos);
}

TEST_CASE("runs emit the manifest, the fixed header, and full-width rows") {
  ExperimentConfig cfg = small_rotor("dr");
  const std::string text = fidsim::run_experiment_text(cfg);
  CHECK(text.rfind(fidsim::config_manifest(cfg), 0) == 0);
  CHECK(text.find(std::string(kHeader) + "\n") != std::string::npos);
  const auto rows = data_rows(text);
  REQUIRE(rows.size() == 5);  // t = 0..4
  for (const auto& row : rows) {
    REQUIRE(row.size() == 12);
    CHECK(!row[0].empty());
    CHECK(!row[1].empty());
    CHECK(row[5] == "40");
    CHECK(row[6] == "dr");
    CHECK(row[7] == "1");
    CHECK(row[10] == "256");
    CHECK(row[11] == "5");
  }
  CHECK(fidsim::run_experiment_text(cfg) == text);  // byte-stable
  std::ostringstream os;
  fidsim::run_experiment(cfg, os);
  CHECK(os.str() == text);
}

TEST_CASE("cell presence tracks the method and ensemble count") {
  const auto dr1 = data_rows(fidsim::run_experiment_text(small_rotor("dr")));
  CHECK(!dr1[1][2].empty());  // amplitude columns filled
  CHECK(!dr1[1][3].empty());
  CHECK(dr1[1][4].empty());  // no scatter without an ensemble

  const auto dr3 = data_rows(fidsim::run_experiment_text(small_rotor("dr", 3)));
  CHECK(!dr3[1][2].empty());
  CHECK(!dr3[1][4].empty());

  const auto cf1 = data_rows(fidsim::run_experiment_text(small_rotor("echo-2")));
  CHECK(cf1[1][2].empty());  // no amplitude for the classical family
  CHECK(cf1[1][3].empty());
  CHECK(cf1[1][4].empty());
  CHECK(cf1[1][6] == "echo-2");

  const auto cf3 = data_rows(fidsim::run_experiment_text(small_rotor("echo-2", 3)));
  CHECK(cf3[1][2].empty());
  CHECK(!cf3[1][4].empty());

  const auto qm = data_rows(fidsim::run_experiment_text(small_rotor("qm")));
  CHECK(!qm[1][2].empty());
  CHECK(qm[1][4].empty());
  CHECK(qm[1][6] == "qm");

  // The spelled form normalizes in the rows; the manifest keeps the input.
  ExperimentConfig prime = small_rotor("echo-1'");
  const std::string text = fidsim::run_experiment_text(prime);
  CHECK(text.find("# run.method = echo-1'\n") != std::string::npos);
  CHECK(data_rows(text)[1][6] == "echo-1prime");
}

TEST_CASE("worker count changes no data byte") {
  ExperimentConfig one = small_rotor("dr", 3);
  ExperimentConfig four = small_rotor("dr", 3);
  four.workers = 4;
  const std::string a = fidsim::run_experiment_text(one);
  const std::string b = fidsim::run_experiment_text(four);
  const std::string tail_a = a.substr(a.find("time,F"));
  const std::string tail_b = b.substr(b.find("time,F"));
  CHECK(tail_a == tail_b);
}

TEST_CASE("time scaling demands a resolved config and sane horizons") {
  ExperimentConfig cfg = small_rotor("dr");
  CHECK_THROWS_AS(fidsim::time_scaling(cfg, {2.0, 4.0}), ConfigError);
  CHECK_THROWS_AS(fidsim::time_scaling(cfg, {4.0, 2.0, 6.0}), ConfigError);
  CHECK_THROWS_AS(fidsim::time_scaling(cfg, {2.0, 2.5, 3.0}), ConfigError);
  CHECK_THROWS_AS(fidsim::time_scaling(cfg, {0.0, 1.0, 2.0}), ConfigError);
  cfg.N = 16;
  const auto tr = fidsim::time_scaling(cfg, {1.0, 2.0, 3.0});
  REQUIRE(tr.points.size() == 3);
  CHECK(tr.points[0].t == 1.0);
  CHECK(tr.points[2].t == 3.0);
  for (const auto& p : tr.points) CHECK(p.seconds >= 0.0);
}

TEST_CASE("the command line maps outcomes to exit codes") {
  TempDir tmp;
  const fs::path cfg_path = tmp.path / "run.cfg";
  {
    std::ofstream os(cfg_path);
    os << "[system]\nkind = rotor\nn1 = 256\nk = 0.9\nepsilon = 0.02\n"
       << "[run]\nt_max = 4\nN = 40\nseed = 5\nmethod = echo-2\n";
  }
  const fs::path out_path = tmp.path / "series.csv";

  SUBCASE("run writes the same bytes the library produces") {
    CHECK(run_cli({"run", cfg_path.string(), "--out", out_path.string()}) == 0);
    std::ifstream in(out_path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = fidsim::load_config_file(cfg_path.string());
    cfg.out = out_path.string();
    fidsim::resolve_config(cfg);
    CHECK(buf.str() == fidsim::run_experiment_text(cfg));
  }

  SUBCASE("seed override lands in the output") {
    CHECK(run_cli({"run", cfg_path.string(), "--seed", "77", "--out", out_path.string()}) ==
          0);
    std::ifstream in(out_path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("# run.seed = 77\n") != std::string::npos);
  }

  SUBCASE("missing and malformed configs exit 2") {
    CHECK(run_cli({"run", (tmp.path / "absent.cfg").string()}) == 2);
    const fs::path bad = tmp.path / "bad.cfg";
    std::ofstream(bad) << "[system]\nfrobnicate = 1\n";
    CHECK(run_cli({"run", bad.string()}) == 2);
  }

  SUBCASE("unwritable output exits 1") {
    CHECK(run_cli({"run", cfg_path.string(), "--out",
                   "/nonexistent_dir_for_tests/out.csv"}) == 1);
  }

  SUBCASE("convergence needs at least two ensembles") {
    CHECK(run_cli({"convergence", cfg_path.string(), "--ensembles", "1"}) == 2);
    CHECK(run_cli({"convergence", cfg_path.string(), "--ensembles", "3", "--out",
                   out_path.string()}) == 0);
    std::ifstream in(out_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto rows = data_rows(buf.str());
    CHECK(!rows[1][4].empty());  // scatter column filled
    CHECK(buf.str().find("# run.S = 3\n") != std::string::npos);
  }

  SUBCASE("bad preset requests exit 2") {
    CHECK(run_cli({"preset", "fig9z", "--out", tmp.path.string()}) == 2);
    CHECK(run_cli({"preset", "fig1b", "--scale", "0", "--out", tmp.path.string()}) == 2);
    CHECK(run_cli({"preset", "fig1b", "--scale", "1.5", "--out", tmp.path.string()}) == 2);
  }

  SUBCASE("timing validates its horizon list") {
    CHECK(run_cli({"timing", "dr", "--t-list", "2,x,6"}) == 2);
    CHECK(run_cli({"timing", "dr", "--t-list", "4,2,6", "--N", "8", "--n1", "64"}) == 2);
    CHECK(run_cli({"timing", "dr", "--t-list", "2", "--N", "8", "--n1", "64"}) == 2);
  }

  SUBCASE("timing reports a fitted exponent") {
    const fs::path tpath = tmp.path / "timing.csv";
    CHECK(run_cli({"timing", "dr", "--t-list", "2,4,6", "--N", "16", "--n1", "64", "--out",
                   tpath.string()}) == 0);
    std::ifstream in(tpath);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("# exponent = ") != std::string::npos);
    CHECK(buf.str().find("time,seconds,N,method,D,k,epsilon,n1,seed\n") !=
          std::string::npos);
  }

  SUBCASE("missing subcommands and help have distinct codes") {
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"--help"}) == 0);
  }
}

TEST_CASE("a preset writes one file per curve plus a manifest") {
  TempDir tmp;
  const fs::path dir = tmp.path / "preset";
  CHECK(run_cli({"preset", "fig1b", "--scale", "0.002", "--out", dir.string()}) == 0);
  CHECK(fs::exists(dir / "fig1b_manifest.txt"));
  CHECK(fs::exists(dir / "fig1b_dr.csv"));
  CHECK(fs::exists(dir / "fig1b_echo-2.csv"));
  CHECK(fs::exists(dir / "fig1b_qm.csv"));
  std::ifstream in(dir / "fig1b_dr.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().rfind("# system.kind = rotor\n", 0) == 0);
  CHECK(buf.str().find("# system.D = 100\n") != std::string::npos);
}
