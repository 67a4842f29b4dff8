#include "fidsim/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fidsim/cf.hpp"
#include "fidsim/detail/engine.hpp"
#include "fidsim/dr.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/quantum.hpp"
#include "fidsim/stats.hpp"

namespace fidsim {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSeriesHeader = "time,F,f_real,f_imag,sigma,N,method,D,k,epsilon,n1,seed\n";
constexpr const char* kTimingHeader = "time,seconds,N,method,D,k,epsilon,n1,seed\n";

/// Keeps the measured runs from being optimized away.
volatile double timing_sink = 0.0;

std::string join_cells(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

struct RowMeta {
  std::uint64_t N = 0;
  std::string method;
  std::size_t dim = 1;
  double kick = 0.0;
  double epsilon = 0.0;
  std::uint32_t n1 = 0;
  std::uint64_t seed = 0;
};

RowMeta meta_for(const SystemSpec& sys, const std::string& method, std::uint64_t N,
                 std::uint64_t seed) {
  RowMeta m;
  m.N = N;
  m.method = method;
  m.dim = sys.dim;
  m.kick = sys.kick;
  m.epsilon = sys.epsilon;
  m.n1 = sys.n1;
  m.seed = seed;
  return m;
}

std::string data_row(double time, double F, const std::complex<double>* f, const double* sigma,
                     const RowMeta& m) {
  std::vector<std::string> cells;
  cells.reserve(12);
  cells.push_back(format_full(time));
  cells.push_back(format_full(F));
  cells.push_back(f ? format_full(f->real()) : std::string());
  cells.push_back(f ? format_full(f->imag()) : std::string());
  cells.push_back(sigma ? format_full(*sigma) : std::string());
  cells.push_back(std::to_string(m.N));
  cells.push_back(m.method);
  cells.push_back(std::to_string(m.dim));
  cells.push_back(format_full(m.kick));
  cells.push_back(format_full(m.epsilon));
  cells.push_back(std::to_string(m.n1));
  cells.push_back(std::to_string(m.seed));
  return join_cells(cells);
}

SeriesSample qm_series(const ExperimentConfig& cfg, const GaussianWavepacket& state) {
  const SystemSpec& sys = cfg.system;
  const std::size_t steps = detail::total_steps(sys, cfg.t_max, cfg.dt);
  const std::vector<std::size_t> reports = report_steps(steps, cfg.report_stride);
  SeriesSample out;
  if (sys.kind == SystemKind::Rotor) {
    FidelitySeries full = qm_fidelity_rotor(state, sys, steps);
    for (std::size_t s : reports) {
      out.times.push_back(full.times[s]);
      out.f.push_back(full.f[s]);
      out.F.push_back(full.F[s]);
    }
    return out;
  }
  const std::vector<double> times = detail::report_times(sys, reports, cfg.dt);
  FidelitySeries qs = sho_qm_fidelity(state, sys, times);
  out.times = qs.times;
  out.f = qs.f;
  out.F = qs.F;
  return out;
}

/// Runs one configured curve and discards the result (timing path).
void run_for_timing(const ExperimentConfig& cfg, const GaussianWavepacket& state) {
  RunOptions opts = config_run_options(cfg);
  if (cfg.method == "dr") {
    DrSeries d = run_dr(state, cfg.system, cfg.t_max, cfg.N, cfg.seed, opts);
    timing_sink = timing_sink + d.F.back();
  } else if (cfg.method == "qm") {
    SeriesSample s = qm_series(cfg, state);
    timing_sink = timing_sink + s.F.back();
  } else {
    CfAlgorithm alg = CfAlgorithm::parse(cfg.method);
    CfSeries c = run_cf(state, cfg.system, alg, cfg.t_max, cfg.N, cfg.seed, opts);
    timing_sink = timing_sink + c.F.back();
  }
}

struct CurveStat {
  double time = 0.0;
  double mean_F = 0.0;
  double sigma = 0.0;
};

/// Ensemble mean and scatter of one estimator at a single matched time.
CurveStat matched_ensemble(const GaussianWavepacket& state, const SystemSpec& sys,
                           const std::string& method, double time, double dt, std::uint64_t N,
                           std::size_t S, std::uint64_t seed, int workers) {
  RunOptions base;
  base.workers = workers;
  base.dt = dt;
  const std::size_t steps = detail::total_steps(sys, time, dt);
  base.report_stride = steps > 0 ? steps : 1;
  auto runner = [&](std::uint64_t sd, std::uint32_t member) {
    RunOptions o = base;
    o.ensemble = member;
    SeriesSample s;
    if (method == "dr") {
      DrSeries d = run_dr(state, sys, time, N, sd, o);
      s.times.push_back(d.times.back());
      s.F.push_back(d.F.back());
    } else {
      CfAlgorithm alg = CfAlgorithm::parse(method);
      CfSeries c = run_cf(state, sys, alg, time, N, sd, o);
      s.times.push_back(c.times.back());
      s.F.push_back(c.F.back());
    }
    return s;
  };
  CurveStat out;
  if (S < 2) {
    SeriesSample one = runner(seed, 0);
    out.time = one.times[0];
    out.mean_F = one.F[0];
    out.sigma = 0.0;
    return out;
  }
  EnsembleStats es = ensemble_error(runner, S, seed);
  out.time = es.times.back();
  out.mean_F = es.mean_F.back();
  out.sigma = es.sigma_F.back();
  return out;
}

std::uint64_t scaled_count(double base, double scale, std::uint64_t min_v) {
  const long long v = std::llround(base * scale);
  if (v < static_cast<long long>(min_v)) return min_v;
  return static_cast<std::uint64_t>(v);
}

std::size_t scaled_ensembles(double base, double scale, std::size_t min_v, std::size_t max_v) {
  const long long v = std::llround(base * scale);
  if (v < static_cast<long long>(min_v)) return min_v;
  if (v > static_cast<long long>(max_v)) return max_v;
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> scaled_dims(const std::vector<std::size_t>& full, double scale,
                                     std::size_t min_keep) {
  const std::size_t n = full.size();
  std::size_t m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale));
  m = std::clamp(m, std::min(min_keep, n), n);
  if (m >= n) return full;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(j) * static_cast<double>(n - 1) /
                     static_cast<double>(m - 1)));
    if (kept.empty() || full[idx] != kept.back()) kept.push_back(full[idx]);
  }
  return kept;
}

std::ofstream open_curve(const fs::path& dir, const std::string& filename,
                         std::vector<std::string>& written) {
  const fs::path p = dir / filename;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open output file: " + p.string());
  written.push_back(p.string());
  return os;
}

void put(std::ostream& os, const std::string& key, const std::string& value) {
  os << key << " = " << value << "\n";
}

void put_d(std::ostream& os, const std::string& key, double value) {
  put(os, key, format_full(value));
}

ExperimentConfig rotor_config(std::size_t dim, double kick, double epsilon, std::uint32_t n1,
                              const std::string& method, double t_max, std::uint64_t N,
                              std::size_t stride, std::uint64_t seed, int workers) {
  ExperimentConfig cfg;
  cfg.system.kind = SystemKind::Rotor;
  cfg.system.dim = dim;
  cfg.system.kick = kick;
  cfg.system.epsilon = epsilon;
  cfg.system.n1 = n1;
  cfg.method = method;
  cfg.t_max = t_max;
  cfg.N = N;
  cfg.report_stride = stride;
  cfg.seed = seed;
  cfg.workers = workers;
  resolve_config(cfg);
  return cfg;
}

void preset_fig1(const std::string& name, double scale, const fs::path& dir,
                 std::uint64_t seed, int workers, std::vector<std::string>& written) {
  const std::size_t dim = 100;
  const double kick = 0.2;
  const double epsilon = 3e-4;
  const std::uint32_t n1 = 8192;
  const double t_max = 100.0;
  const bool panel_a = name == "fig1a";

  std::ofstream man = open_curve(dir, name + "_manifest.txt", written);
  put(man, "preset", name);
  put_d(man, "scale", scale);
  put(man, "seed", std::to_string(seed));
  put(man, "system", "rotor D=100 k=0.2 epsilon=0.0003 n1=8192");
  put_d(man, "t_max", t_max);

  if (panel_a) {
    const std::uint64_t N = scaled_count(7e7, scale, 64);
    put(man, "N", std::to_string(N));
    put(man, "curves", "echo-1 echo-1prime");
    put(man, "note", "both curves share the base seed, so they see matched samples");
    for (const std::string& method : {std::string("echo-1"), std::string("echo-1prime")}) {
      ExperimentConfig cfg = rotor_config(dim, kick, epsilon, n1, method, t_max, N, 2, seed,
                                          workers);
      std::ofstream os = open_curve(dir, name + "_" + method + ".csv", written);
      run_experiment(cfg, os);
    }
    return;
  }

  const std::uint64_t N = scaled_count(2048, scale, 2);
  put(man, "N", std::to_string(N));
  put(man, "curves", "dr echo-2 qm");
  for (const std::string& method : {std::string("dr"), std::string("echo-2")}) {
    ExperimentConfig cfg = rotor_config(dim, kick, epsilon, n1, method, t_max, N, 1, seed,
                                        workers);
    std::ofstream os = open_curve(dir, name + "_" + method + ".csv", written);
    run_experiment(cfg, os);
  }
  ExperimentConfig qm = rotor_config(dim, kick, epsilon, n1, "qm", t_max, 1, 1, seed, workers);
  std::ofstream os = open_curve(dir, name + "_qm.csv", written);
  run_experiment(qm, os);
}

const std::array<const char*, 5> kScatterMethods = {"dr", "echo-1", "echo-1prime", "echo-N-1",
                                                    "echo-2"};

void preset_fig2(const std::string& name, double scale, const fs::path& dir,
                 std::uint64_t seed, int workers, std::vector<std::string>& written) {
  const bool panel_a = name == "fig2a";
  SystemSpec sys;
  double target_F = 0.0;
  double t_cap = 0.0;
  std::vector<std::size_t> dims_full;
  double n_full = 0.0;
  if (panel_a) {
    sys.kind = SystemKind::Sho;
    sys.epsilon = 0.8;
    sys.sho_hbar = 1.0;
    dims_full = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    n_full = 1e7;
    target_F = 0.3;
    t_cap = 3.2;
  } else {
    sys.kind = SystemKind::Rotor;
    sys.kick = 0.2;
    sys.epsilon = 1e-4;
    sys.n1 = 131072;
    dims_full = {1, 5, 20, 100};
    n_full = 5e5;
    target_F = 0.9;
    t_cap = 2000.0;
  }
  const std::vector<std::size_t> dims = scaled_dims(dims_full, scale, 3);
  const std::uint64_t N = scaled_count(n_full, scale, 4096);
  const std::size_t S = scaled_ensembles(100.0, scale, 4, 100);
  const double dt = kDefaultShoDt;

  std::ofstream man = open_curve(dir, name + "_manifest.txt", written);
  put(man, "preset", name);
  put_d(man, "scale", scale);
  put(man, "seed", std::to_string(seed));
  if (panel_a) {
    put(man, "system", "sho epsilon=0.8 hbar=1 omega=1");
    put_d(man, "dt", dt);
  } else {
    put(man, "system", "rotor k=0.2 epsilon=0.0001 n1=131072");
  }
  put_d(man, "target_F", target_F);
  put(man, "N", std::to_string(N));
  put(man, "S", std::to_string(S));
  {
    std::string ds;
    for (std::size_t d : dims) ds += (ds.empty() ? "" : " ") + std::to_string(d);
    put(man, "D_list", ds);
  }

  // Matched report time per dimension, from an interference-estimator pilot.
  std::vector<MatchedTime> matched(dims.size());
  RunOptions pilot_opts;
  pilot_opts.workers = workers;
  pilot_opts.dt = dt;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    SystemSpec s = sys;
    s.dim = dims[i];
    GaussianWavepacket state = GaussianWavepacket::coherent(
        s.dim, s.hbar(), 1.0, s.kind == SystemKind::Rotor ? 3.8832220774509332 : 0.5);
    matched[i] = find_time_for_fidelity(state, s, target_F, t_cap, 4096, seed, pilot_opts);
    put_d(man, "matched_time[D=" + std::to_string(dims[i]) + "]", matched[i].time);
    put_d(man, "matched_F[D=" + std::to_string(dims[i]) + "]", matched[i].F);
  }

  for (const char* method : kScatterMethods) {
    std::ofstream os = open_curve(dir, name + "_" + std::string(method) + ".csv", written);
    os << "# preset = " << name << "\n";
    os << "# method = " << method << "\n";
    os << "# S = " << S << "\n";
    os << kSeriesHeader;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      SystemSpec s = sys;
      s.dim = dims[i];
      GaussianWavepacket state = GaussianWavepacket::coherent(
          s.dim, s.hbar(), 1.0, s.kind == SystemKind::Rotor ? 3.8832220774509332 : 0.5);
      CurveStat st = matched_ensemble(state, s, method, matched[i].time, dt, N, S, seed,
                                      workers);
      RowMeta m = meta_for(s, method, N, seed);
      os << data_row(st.time, st.mean_F, nullptr, S > 1 ? &st.sigma : nullptr, m);
    }
  }
}

void preset_fig3(double scale, const fs::path& dir, std::uint64_t seed, int workers,
                 std::vector<std::string>& written) {
  struct Regime {
    const char* label;
    double kick;
    double epsilon;
    std::size_t dim;
    double t_cap;
  };
  // Decay-regime systems on the desk-sized grid n1 = 8192: strongly chaotic
  // (k = 18), quasi-integrable many-DOF, and quasi-integrable single-DOF
  // with a stronger perturbation.
  const std::array<Regime, 3> regimes = {Regime{"fgr", 18.0, 1.024e-4, 10, 200.0},
                                         Regime{"gaussian", 0.2, 1.024e-4, 100, 200.0},
                                         Regime{"algebraic", 0.2, 1.8e-4, 1, 500.0}};
  const std::uint32_t n1 = 8192;
  const double target_F = 0.94;
  const std::array<std::uint64_t, 4> n_ladder = {256, 1024, 4096, 16384};
  const std::size_t S = scaled_ensembles(100.0, scale, 4, 100);

  std::ofstream man = open_curve(dir, "fig3_manifest.txt", written);
  put(man, "preset", "fig3");
  put_d(man, "scale", scale);
  put(man, "seed", std::to_string(seed));
  put(man, "n1", std::to_string(n1));
  put_d(man, "target_F", target_F);
  put(man, "S", std::to_string(S));
  put(man, "N_ladder", "256 1024 4096 16384");
  put(man, "note", "scale shrinks the ensemble count; the trajectory ladder is fixed");

  for (const Regime& rg : regimes) {
    SystemSpec sys;
    sys.kind = SystemKind::Rotor;
    sys.dim = rg.dim;
    sys.kick = rg.kick;
    sys.epsilon = rg.epsilon;
    sys.n1 = n1;
    GaussianWavepacket state =
        GaussianWavepacket::coherent(sys.dim, sys.hbar(), 1.0, 3.8832220774509332);
    RunOptions pilot_opts;
    pilot_opts.workers = workers;
    MatchedTime mt = find_time_for_fidelity(state, sys, target_F, rg.t_cap, 4096, seed,
                                            pilot_opts);
    const std::string label = rg.label;
    put(man, "system[" + label + "]",
        "rotor D=" + std::to_string(rg.dim) + " k=" + format_full(rg.kick) +
            " epsilon=" + format_full(rg.epsilon));
    put_d(man, "matched_time[" + label + "]", mt.time);
    put_d(man, "matched_F[" + label + "]", mt.F);
    put_d(man, "n_bound_sigma_0.02[" + label + "]", predict_n_F_bound(0.02, mt.F));
    put_d(man, "n_normal_sigma_0.02[" + label + "]", predict_n_F_normal(0.02, mt.F));

    std::ofstream os = open_curve(dir, "fig3_" + label + ".csv", written);
    os << "# preset = fig3\n";
    os << "# regime = " << label << "\n";
    os << "# S = " << S << "\n";
    os << kSeriesHeader;
    for (std::uint64_t n : n_ladder) {
      CurveStat st = matched_ensemble(state, sys, "dr", mt.time, kDefaultShoDt, n, S, seed,
                                      workers);
      RowMeta m = meta_for(sys, "dr", n, seed);
      os << data_row(st.time, st.mean_F, nullptr, S > 1 ? &st.sigma : nullptr, m);
    }
  }
}

void preset_fig4(const std::string& name, double scale, const fs::path& dir,
                 std::uint64_t seed, int workers, std::vector<std::string>& written) {
  const std::size_t dim = name == "fig4a" ? 20 : 1;
  const double kick = 0.2;
  const double epsilon = 1e-3;
  const std::uint32_t n1 = 4096;
  const std::vector<double> horizons = {32.0, 64.0, 128.0, 256.0};
  const std::uint64_t n_linear = scaled_count(16384, scale, 256);
  const std::uint64_t n_quadratic = scaled_count(1024, scale, 8);

  std::ofstream man = open_curve(dir, name + "_manifest.txt", written);
  put(man, "preset", name);
  put_d(man, "scale", scale);
  put(man, "seed", std::to_string(seed));
  put(man, "system", "rotor D=" + std::to_string(dim) + " k=0.2 epsilon=0.001 n1=4096");
  put(man, "t_list", "32 64 128 256");
  put(man, "N_linear_methods", std::to_string(n_linear));
  put(man, "N_quadratic_methods", std::to_string(n_quadratic));
  put(man, "note",
      "fixed per-method trajectory counts; wall time is the median of 3 full-curve runs");

  const std::array<const char*, 5> methods = {"dr", "fid-0", "echo-1", "echo-2", "fid-2"};
  for (const char* method : methods) {
    const bool linear = std::string(method) == "dr" || std::string(method) == "fid-0";
    const std::uint64_t N = linear ? n_linear : n_quadratic;
    ExperimentConfig cfg = rotor_config(dim, kick, epsilon, n1, method, horizons.back(), N, 1,
                                        seed, workers);
    TimingResult tr = time_scaling(cfg, horizons);
    put_d(man, "exponent[" + std::string(method) + "]", tr.exponent);

    std::ofstream os = open_curve(dir, name + "_" + std::string(method) + ".csv", written);
    os << "# preset = " << name << "\n";
    os << "# method = " << method << "\n";
    os << kTimingHeader;
    for (const TimingPoint& pt : tr.points) {
      std::vector<std::string> cells = {format_full(pt.t),
                                        format_full(pt.seconds),
                                        std::to_string(N),
                                        std::string(method),
                                        std::to_string(dim),
                                        format_full(kick),
                                        format_full(epsilon),
                                        std::to_string(n1),
                                        std::to_string(seed)};
      os << join_cells(cells);
    }
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::ostream& os) {
  if (!cfg.resolved) throw std::logic_error("config must be resolved before running");
  const GaussianWavepacket state = config_state(cfg);
  const SystemSpec& sys = cfg.system;
  const RunOptions base_opts = config_run_options(cfg);

  os << config_manifest(cfg);
  os << kSeriesHeader;

  if (cfg.method == "dr") {
    RowMeta m = meta_for(sys, "dr", cfg.N, cfg.seed);
    if (cfg.S > 1) {
      auto runner = [&](std::uint64_t sd, std::uint32_t member) {
        RunOptions o = base_opts;
        o.ensemble = member;
        DrSeries d = run_dr(state, sys, cfg.t_max, cfg.N, sd, o);
        return SeriesSample{d.times, d.F, d.f};
      };
      EnsembleStats es = ensemble_error(runner, cfg.S, cfg.seed);
      for (std::size_t r = 0; r < es.times.size(); ++r) {
        os << data_row(es.times[r], es.mean_F[r], &es.mean_f[r], &es.sigma_F[r], m);
      }
    } else {
      DrSeries d = run_dr(state, sys, cfg.t_max, cfg.N, cfg.seed, base_opts);
      for (std::size_t r = 0; r < d.times.size(); ++r) {
        os << data_row(d.times[r], d.F[r], &d.f[r], nullptr, m);
      }
    }
    return;
  }

  if (cfg.method == "qm") {
    SeriesSample s = qm_series(cfg, state);
    RowMeta m = meta_for(sys, "qm", cfg.N, cfg.seed);
    for (std::size_t r = 0; r < s.times.size(); ++r) {
      os << data_row(s.times[r], s.F[r], &s.f[r], nullptr, m);
    }
    return;
  }

  const CfAlgorithm alg = CfAlgorithm::parse(cfg.method);
  RowMeta m = meta_for(sys, alg.name(), cfg.N, cfg.seed);
  if (cfg.S > 1) {
    auto runner = [&](std::uint64_t sd, std::uint32_t member) {
      RunOptions o = base_opts;
      o.ensemble = member;
      CfSeries c = run_cf(state, sys, alg, cfg.t_max, cfg.N, sd, o);
      return SeriesSample{c.times, c.F, {}};
    };
    EnsembleStats es = ensemble_error(runner, cfg.S, cfg.seed);
    for (std::size_t r = 0; r < es.times.size(); ++r) {
      os << data_row(es.times[r], es.mean_F[r], nullptr, &es.sigma_F[r], m);
    }
  } else {
    CfSeries c = run_cf(state, sys, alg, cfg.t_max, cfg.N, cfg.seed, base_opts);
    for (std::size_t r = 0; r < c.times.size(); ++r) {
      os << data_row(c.times[r], c.F[r], nullptr, nullptr, m);
    }
  }
}

std::string run_experiment_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  run_experiment(cfg, os);
  return os.str();
}

TimingResult time_scaling(const ExperimentConfig& base, const std::vector<double>& horizons) {
  if (!base.resolved) throw std::logic_error("config must be resolved before timing");
  if (horizons.size() < 3) throw ConfigError("timing needs at least 3 horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0)) throw ConfigError("timing horizons must be positive");
    if (i > 0 && !(horizons[i] > horizons[i - 1])) {
      throw ConfigError("timing horizons must be strictly increasing");
    }
    if (base.system.kind == SystemKind::Rotor &&
        std::abs(horizons[i] - std::round(horizons[i])) > 1e-9) {
      throw ConfigError("rotor timing horizons must be integer kick counts");
    }
  }

  ExperimentConfig cfg = base;
  cfg.report_stride = 1;
  cfg.workers = 1;
  cfg.S = 1;
  const GaussianWavepacket state = config_state(cfg);

  using clock = std::chrono::steady_clock;
  auto timed = [&](double t) {
    cfg.t_max = t;
    const auto t0 = clock::now();
    run_for_timing(cfg, state);
    const auto t1 = clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
  };

  cfg.t_max = horizons.front();
  run_for_timing(cfg, state);  // warm-up, excluded

  TimingResult out;
  for (double t : horizons) {
    std::array<double, 3> reps{};
    for (double& r : reps) r = timed(t);
    std::sort(reps.begin(), reps.end());
    out.points.push_back({t, reps[1]});
  }

  const std::size_t n = out.points.size();
  double xbar = 0.0, ybar = 0.0;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(out.points[i].t);
    y[i] = std::log(std::max(out.points[i].seconds, 1e-9));
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  out.exponent = sxy / sxx;
  return out;
}

std::vector<std::string> run_figure_preset(const std::string& name, double scale,
                                           const std::string& out_dir, std::uint64_t seed,
                                           int workers) {
  if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError("preset scale must lie in (0, 1]");
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  std::vector<std::string> written;
  if (name == "fig1a" || name == "fig1b") {
    preset_fig1(name, scale, dir, seed, workers, written);
  } else if (name == "fig2a" || name == "fig2b") {
    preset_fig2(name, scale, dir, seed, workers, written);
  } else if (name == "fig3") {
    preset_fig3(scale, dir, seed, workers, written);
  } else if (name == "fig4a" || name == "fig4b") {
    preset_fig4(name, scale, dir, seed, workers, written);
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return written;
}

}  // namespace fidsim
