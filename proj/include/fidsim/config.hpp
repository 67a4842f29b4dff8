#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/phasespace.hpp"
#include "fidsim/run_options.hpp"

namespace fidsim {

/// Parsed experiment description. Optional fields are resolved to explicit
/// values by resolve_config, so a resolved config (and its manifest echo)
/// has no hidden defaults.
struct ExperimentConfig {
  SystemSpec system;
  std::optional<double> q_center;
  std::optional<double> p_center;
  std::optional<double> sigma_q;  // unset or "default" = coherent width
  std::string method = "dr";
  double t_max = 10.0;
  double dt = kDefaultShoDt;
  std::uint64_t N = 1000;
  std::size_t S = 1;
  std::uint64_t seed = 1;
  std::size_t report_stride = 1;
  int workers = 1;
  std::string out;

  /// section.key names seen in the input, for conflict diagnostics.
  std::vector<std::string> keys_seen;
  /// Non-fatal validation notes (e.g. wide packet on the torus).
  std::vector<std::string> warnings;
  bool resolved = false;

  bool saw(const std::string& key) const;
};

/// Parses the key = value format with [system] / [state] / [run] sections.
/// Unknown sections or keys and malformed values raise ConfigError naming
/// the offending field. Blank lines and lines starting with # or ; are
/// ignored.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Fills defaults (centers, widths, coherent sigma), checks admissibility
/// (method/system combinations, torus constraints, power-of-two n1) and
/// throws ConfigError naming the offending field. Idempotent.
void resolve_config(ExperimentConfig& cfg);

/// Initial state implied by a resolved config.
GaussianWavepacket config_state(const ExperimentConfig& cfg);

RunOptions config_run_options(const ExperimentConfig& cfg);

/// Echo of every resolved field as "# section.key = value" lines; doubles at
/// full precision so the manifest is byte-stable.
std::string config_manifest(const ExperimentConfig& cfg);

/// %.17g rendering used by manifests and CSV cells.
std::string format_full(double v);

}  // namespace fidsim
