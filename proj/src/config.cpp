#include "fidsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fidsim/cf.hpp"
#include "fidsim/errors.hpp"

namespace fidsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
/// Default rotor momentum center: pi*(sqrt(5)-1), an irrational winding far
/// from low-order resonances of the q -> q + p drift.
constexpr double kGoldenP = 3.8832220774509332;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + " is not a number: '" + value + "'");
  }
  if (pos != value.size() || !std::isfinite(v)) {
    throw ConfigError(key + " is not a number: '" + value + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    // Fall back through the double path so 1e6-style counts are accepted.
    const double v = parse_double(key, value);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
      throw ConfigError(key + " must be a non-negative integer: '" + value + "'");
    }
    return static_cast<std::uint64_t>(v);
  }
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError(key + " must be a non-negative integer: '" + value + "'");
  }
}

void apply_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string full = section + "." + key;
  cfg.keys_seen.push_back(full);
  if (section == "system") {
    if (key == "kind") {
      if (value == "rotor") {
        cfg.system.kind = SystemKind::Rotor;
      } else if (value == "sho") {
        cfg.system.kind = SystemKind::Sho;
      } else {
        throw ConfigError("system.kind must be rotor or sho, got '" + value + "'");
      }
    } else if (key == "D") {
      const std::uint64_t d = parse_u64(full, value);
      if (d < 1) throw ConfigError("system.D must be at least 1");
      cfg.system.dim = static_cast<std::size_t>(d);
    } else if (key == "k") {
      cfg.system.kick = parse_double(full, value);
    } else if (key == "epsilon") {
      cfg.system.epsilon = parse_double(full, value);
    } else if (key == "n1") {
      const std::uint64_t n = parse_u64(full, value);
      if (n > 0xFFFFFFFFULL) throw ConfigError("system.n1 is out of range");
      cfg.system.n1 = static_cast<std::uint32_t>(n);
    } else if (key == "omega") {
      cfg.system.omega.assign(1, parse_double(full, value));
    } else if (key == "hbar") {
      cfg.system.sho_hbar = parse_double(full, value);
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "state") {
    if (key == "q_center") {
      cfg.q_center = parse_double(full, value);
    } else if (key == "p_center") {
      cfg.p_center = parse_double(full, value);
    } else if (key == "sigma_q") {
      if (value == "default") {
        cfg.sigma_q.reset();
      } else {
        cfg.sigma_q = parse_double(full, value);
      }
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "run") {
    if (key == "method") {
      cfg.method = value;
    } else if (key == "t_max") {
      cfg.t_max = parse_double(full, value);
    } else if (key == "dt") {
      cfg.dt = parse_double(full, value);
    } else if (key == "N") {
      cfg.N = parse_u64(full, value);
    } else if (key == "S") {
      cfg.S = static_cast<std::size_t>(parse_u64(full, value));
    } else if (key == "seed") {
      cfg.seed = parse_u64(full, value);
    } else if (key == "report_stride") {
      cfg.report_stride = static_cast<std::size_t>(parse_u64(full, value));
    } else if (key == "workers") {
      const std::uint64_t w = parse_u64(full, value);
      if (w > 4096) throw ConfigError("run.workers is out of range");
      cfg.workers = static_cast<int>(w);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else {
    throw ConfigError("unknown section '[" + section + "]'");
  }
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_full(v[i]);
  }
  return out;
}

}  // namespace

bool ExperimentConfig::saw(const std::string& key) const {
  return std::find(keys_seen.begin(), keys_seen.end(), key) != keys_seen.end();
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError("malformed section header on line " + std::to_string(lineno));
      }
      section = trim(text.substr(1, text.size() - 2));
      if (section != "system" && section != "state" && section != "run") {
        throw ConfigError("unknown section '[" + section + "]'");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value on line " + std::to_string(lineno));
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("empty key on line " + std::to_string(lineno));
    }
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any section header");
    }
    apply_key(cfg, section, key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void resolve_config(ExperimentConfig& cfg) {
  SystemSpec& sys = cfg.system;
  const bool rotor = sys.kind == SystemKind::Rotor;
  if (sys.dim < 1) throw ConfigError("system.D must be at least 1");
  if (rotor) {
    if (cfg.saw("system.omega")) throw ConfigError("system.omega applies only to kind = sho");
    if (cfg.saw("system.hbar")) {
      throw ConfigError("system.hbar is fixed to 2*pi/n1 for kind = rotor");
    }
    if (sys.n1 < 2 || (sys.n1 & (sys.n1 - 1)) != 0) {
      throw ConfigError("system.n1 must be a power of two, at least 2");
    }
    if (sys.n1 > (1u << 24)) {
      throw ConfigError("system.n1 exceeds the memory budget (max 2^24)");
    }
    const double r = std::round(cfg.t_max);
    if (std::abs(cfg.t_max - r) > 1e-9) {
      throw ConfigError("run.t_max must be an integer kick count for kind = rotor");
    }
  } else {
    if (cfg.saw("system.k")) throw ConfigError("system.k applies only to kind = rotor");
    if (cfg.saw("system.n1")) throw ConfigError("system.n1 applies only to kind = rotor");
    if (!(sys.sho_hbar > 0.0)) throw ConfigError("system.hbar must be positive");
    for (double w : sys.omega) {
      if (!(w > 0.0)) throw ConfigError("system.omega must be positive");
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("run.dt must be positive");
  }
  if (!(cfg.t_max >= 0.0)) throw ConfigError("run.t_max must be non-negative");
  if (cfg.N < 1) throw ConfigError("run.N must be at least 1");
  if (cfg.S < 1) throw ConfigError("run.S must be at least 1");
  if (cfg.report_stride < 1) throw ConfigError("run.report_stride must be at least 1");
  if (cfg.workers < 0) throw ConfigError("run.workers must be non-negative");

  if (!cfg.q_center) cfg.q_center = 1.0;
  if (!cfg.p_center) cfg.p_center = rotor ? kGoldenP : 0.5;
  if (cfg.sigma_q && !(*cfg.sigma_q > 0.0)) {
    throw ConfigError("state.sigma_q must be positive");
  }

  const double hbar = sys.hbar();
  double sigma_max = 0.0;
  double sigma_min = 1e300;
  for (std::size_t i = 0; i < sys.dim; ++i) {
    const double omega_ref = rotor ? 1.0 : sys.omega_at(i);
    const double s = cfg.sigma_q ? *cfg.sigma_q : std::sqrt(0.5 * hbar / omega_ref);
    sigma_max = std::max(sigma_max, s);
    sigma_min = std::min(sigma_min, s);
  }
  if (rotor && sigma_max > kTwoPi / 10.0) {
    cfg.warnings.push_back(
        "state.sigma_q exceeds 2*pi/10; the torus-cell Gaussian approximation degrades");
  }

  if (cfg.method == "qm") {
    if (rotor) {
      const double dq = kTwoPi / static_cast<double>(sys.n1);
      if (sigma_min < 3.0 * dq) {
        throw ConfigError("state.sigma_q is below three grid spacings for this n1");
      }
    }
    cfg.S = 1;
  } else if (cfg.method != "dr") {
    try {
      const CfAlgorithm alg = CfAlgorithm::parse(cfg.method);
      alg.validate(sys);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("run.method: ") + e.what());
    }
  }
  cfg.resolved = true;
}

GaussianWavepacket config_state(const ExperimentConfig& cfg) {
  if (!cfg.resolved) {
    throw std::logic_error("config_state requires a resolved config");
  }
  const SystemSpec& sys = cfg.system;
  const bool rotor = sys.kind == SystemKind::Rotor;
  GaussianWavepacket state;
  state.hbar = sys.hbar();
  state.q_center.assign(sys.dim, *cfg.q_center);
  state.p_center.assign(sys.dim, *cfg.p_center);
  state.sigma_q.resize(sys.dim);
  for (std::size_t i = 0; i < sys.dim; ++i) {
    const double omega_ref = rotor ? 1.0 : sys.omega_at(i);
    state.sigma_q[i] = cfg.sigma_q ? *cfg.sigma_q : std::sqrt(0.5 * state.hbar / omega_ref);
  }
  return state;
}

RunOptions config_run_options(const ExperimentConfig& cfg) {
  RunOptions opts;
  opts.workers = cfg.workers;
  opts.report_stride = cfg.report_stride;
  opts.dt = cfg.dt;
  return opts;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string config_manifest(const ExperimentConfig& cfg) {
  if (!cfg.resolved) {
    throw std::logic_error("config_manifest requires a resolved config");
  }
  const SystemSpec& sys = cfg.system;
  const bool rotor = sys.kind == SystemKind::Rotor;
  const GaussianWavepacket state = config_state(cfg);
  std::ostringstream out;
  out << "# system.kind = " << (rotor ? "rotor" : "sho") << "\n";
  out << "# system.D = " << sys.dim << "\n";
  if (rotor) {
    out << "# system.k = " << format_full(sys.kick) << "\n";
    out << "# system.epsilon = " << format_full(sys.epsilon) << "\n";
    out << "# system.n1 = " << sys.n1 << "\n";
  } else {
    out << "# system.epsilon = " << format_full(sys.epsilon) << "\n";
    out << "# system.omega = "
        << (sys.omega.empty() ? format_full(1.0) : join_doubles(sys.omega)) << "\n";
    out << "# system.hbar = " << format_full(sys.sho_hbar) << "\n";
  }
  out << "# state.q_center = " << format_full(*cfg.q_center) << "\n";
  out << "# state.p_center = " << format_full(*cfg.p_center) << "\n";
  const bool uniform_sigma =
      std::all_of(state.sigma_q.begin(), state.sigma_q.end(),
                  [&](double s) { return s == state.sigma_q[0]; });
  out << "# state.sigma_q = "
      << (uniform_sigma ? format_full(state.sigma_q[0]) : join_doubles(state.sigma_q))
      << "\n";
  out << "# run.method = " << cfg.method << "\n";
  out << "# run.t_max = " << format_full(cfg.t_max) << "\n";
  if (!rotor) out << "# run.dt = " << format_full(cfg.dt) << "\n";
  out << "# run.N = " << cfg.N << "\n";
  out << "# run.S = " << cfg.S << "\n";
  out << "# run.seed = " << cfg.seed << "\n";
  out << "# run.report_stride = " << cfg.report_stride << "\n";
  out << "# run.workers = " << cfg.workers << "\n";
  out << "# run.out = " << cfg.out << "\n";
  return out.str();
}

}  // namespace fidsim
