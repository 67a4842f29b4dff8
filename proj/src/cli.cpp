#include "fidsim/cli.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fidsim/config.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/experiment.hpp"

namespace fidsim {
namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    const std::size_t a = item.find_first_not_of(" \t");
    if (a == std::string::npos) throw ConfigError("empty entry in t-list");
    const std::size_t b = item.find_last_not_of(" \t");
    item = item.substr(a, b - a + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad t-list entry: " + item);
    }
    if (used != item.size()) throw ConfigError("bad t-list entry: " + item);
    values.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return values;
}

void write_to(const std::string& out, const std::function<void(std::ostream&)>& fn) {
  if (out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  fn(os);
}

void print_warnings(const ExperimentConfig& cfg) {
  for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Loschmidt echo toolkit: semiclassical interference and classical echo "
               "estimators of quantum fidelity decay"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;

  auto* run_cmd = app.add_subcommand("run", "run one configured experiment and emit CSV");
  run_cmd->add_option("config", config_path, "config file (key = value sections)")->required();
  auto* run_seed = run_cmd->add_option("--seed", seed, "override the base seed");
  auto* run_workers = run_cmd->add_option("--workers", workers, "override the worker count");
  auto* run_out = run_cmd->add_option("--out", out, "override the output path");

  std::string preset_name;
  double scale = 0.01;
  std::string preset_dir;
  auto* preset_cmd = app.add_subcommand(
      "preset", "write a desk-scaled figure dataset (one CSV per curve plus a manifest)");
  preset_cmd->add_option("name", preset_name,
                         "fig1a, fig1b, fig2a, fig2b, fig3, fig4a or fig4b")
      ->required();
  preset_cmd->add_option("--scale", scale, "fraction of the published sizes, in (0, 1]");
  preset_cmd->add_option("--out", preset_dir, "output directory (default: current)");
  auto* preset_seed = preset_cmd->add_option("--seed", seed, "base seed");
  auto* preset_workers = preset_cmd->add_option("--workers", workers, "worker count");

  std::string method;
  std::string t_list_text;
  std::uint64_t timing_n = 1024;
  std::size_t timing_dim = 1;
  std::string kind = "rotor";
  double kick = 0.2;
  double epsilon = 1e-3;
  std::uint32_t n1 = 4096;
  double omega = 1.0;
  double hbar = 1.0;
  double dt = kDefaultShoDt;
  auto* timing_cmd =
      app.add_subcommand("timing", "measure wall-time scaling of one method with t");
  timing_cmd->add_option("method", method, "dr, qm or a classical estimator name")->required();
  timing_cmd->add_option("--t-list", t_list_text, "comma-separated ascending horizons")
      ->required();
  timing_cmd->add_option("--N", timing_n, "trajectories per run");
  timing_cmd->add_option("--D", timing_dim, "degrees of freedom");
  timing_cmd->add_option("--kind", kind, "rotor or sho");
  timing_cmd->add_option("--k", kick, "rotor kick strength");
  timing_cmd->add_option("--epsilon", epsilon, "perturbation strength");
  timing_cmd->add_option("--n1", n1, "rotor grid size (power of two)");
  timing_cmd->add_option("--omega", omega, "oscillator frequency");
  timing_cmd->add_option("--hbar", hbar, "oscillator hbar");
  timing_cmd->add_option("--dt", dt, "oscillator time step");
  auto* timing_seed = timing_cmd->add_option("--seed", seed, "base seed");
  auto* timing_out = timing_cmd->add_option("--out", out, "output path");

  std::size_t ensembles = 0;
  auto* conv_cmd = app.add_subcommand(
      "convergence", "run a config S times with disjoint randomness and report the scatter");
  conv_cmd->add_option("config", config_path, "config file")->required();
  conv_cmd->add_option("--ensembles", ensembles, "independent repetitions (at least 2)")
      ->required();
  auto* conv_seed = conv_cmd->add_option("--seed", seed, "override the base seed");
  auto* conv_workers = conv_cmd->add_option("--workers", workers, "override the worker count");
  auto* conv_out = conv_cmd->add_option("--out", out, "override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed() || conv_cmd->parsed()) {
      ExperimentConfig cfg = load_config_file(config_path);
      if (run_seed->count() > 0 || conv_seed->count() > 0) cfg.seed = seed;
      if (run_workers->count() > 0 || conv_workers->count() > 0) cfg.workers = workers;
      if (run_out->count() > 0 || conv_out->count() > 0) cfg.out = out;
      if (conv_cmd->parsed()) {
        if (ensembles < 2) throw ConfigError("convergence needs at least 2 ensembles");
        cfg.S = ensembles;
      }
      resolve_config(cfg);
      print_warnings(cfg);
      write_to(cfg.out, [&](std::ostream& os) { run_experiment(cfg, os); });
      return 0;
    }

    if (preset_cmd->parsed()) {
      if (preset_seed->count() == 0) seed = 1;
      if (preset_workers->count() == 0) workers = 1;
      const std::vector<std::string> written =
          run_figure_preset(preset_name, scale, preset_dir, seed, workers);
      for (const std::string& path : written) std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (timing_cmd->parsed()) {
      const std::vector<double> horizons = parse_double_list(t_list_text);
      ExperimentConfig cfg;
      cfg.system.dim = timing_dim;
      cfg.method = method;
      cfg.N = timing_n;
      if (timing_seed->count() > 0) cfg.seed = seed;
      if (kind == "rotor") {
        cfg.system.kind = SystemKind::Rotor;
        cfg.system.kick = kick;
        cfg.system.epsilon = epsilon;
        cfg.system.n1 = n1;
      } else if (kind == "sho") {
        cfg.system.kind = SystemKind::Sho;
        cfg.system.epsilon = epsilon;
        cfg.system.omega.assign(1, omega);
        cfg.system.sho_hbar = hbar;
        cfg.dt = dt;
      } else {
        throw ConfigError("timing kind must be rotor or sho");
      }
      if (horizons.empty()) throw ConfigError("t-list must not be empty");
      cfg.t_max = horizons.back();
      resolve_config(cfg);
      TimingResult tr = time_scaling(cfg, horizons);
      const std::string out_path = timing_out->count() > 0 ? out : std::string();
      write_to(out_path, [&](std::ostream& os) {
        os << "# method = " << cfg.method << "\n";
        os << "# N = " << cfg.N << "\n";
        os << "# exponent = " << format_full(tr.exponent) << "\n";
        os << "time,seconds,N,method,D,k,epsilon,n1,seed\n";
        for (const TimingPoint& pt : tr.points) {
          os << format_full(pt.t) << ',' << format_full(pt.seconds) << ',' << cfg.N << ','
             << cfg.method << ',' << cfg.system.dim << ',' << format_full(cfg.system.kick)
             << ',' << format_full(cfg.system.epsilon) << ',' << cfg.system.n1 << ','
             << cfg.seed << "\n";
        }
      });
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fidsim
