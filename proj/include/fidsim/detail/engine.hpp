#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/phasespace.hpp"

namespace fidsim::detail {

/// Shared argument validation for the Monte Carlo engines.
inline void check_run(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                      std::uint64_t N) {
  if (state.dim() != spec.dim) {
    throw std::invalid_argument("state does not match system dimension");
  }
  if (N < 1) throw std::invalid_argument("trajectory count must be at least 1");
  if (t_max < 0.0) throw std::invalid_argument("t_max must be non-negative");
  if (spec.kind == SystemKind::Sho) {
    if (!spec.omega.empty() && spec.omega.size() != 1 && spec.omega.size() != spec.dim) {
      throw std::invalid_argument("omega must be empty, one entry, or one entry per DOF");
    }
    for (double w : spec.omega) {
      if (!(w > 0.0)) throw std::invalid_argument("omega entries must be positive");
    }
  }
}

inline std::size_t rotor_kicks(double t_max) {
  const double r = std::round(t_max);
  if (std::abs(t_max - r) > 1e-9) {
    throw std::invalid_argument("rotor t_max must be an integer kick count");
  }
  return static_cast<std::size_t>(r);
}

/// Step count for a horizon: kicks for the rotor, t_max/dt for the flow.
inline std::size_t total_steps(const SystemSpec& spec, double t_max, double dt) {
  if (spec.kind == SystemKind::Rotor) return rotor_kicks(t_max);
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  return static_cast<std::size_t>(std::llround(t_max / dt));
}

inline std::vector<double> report_times(const SystemSpec& spec,
                                        const std::vector<std::size_t>& reports, double dt) {
  std::vector<double> times(reports.size());
  for (std::size_t r = 0; r < reports.size(); ++r) {
    times[r] = spec.kind == SystemKind::Rotor ? static_cast<double>(reports[r])
                                              : static_cast<double>(reports[r]) * dt;
  }
  return times;
}

}  // namespace fidsim::detail
