#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fidsim/config.hpp"

namespace fidsim {

/// Runs the configured method and writes the config manifest followed by CSV
/// rows (columns time,F,f_real,f_imag,sigma,N,method,D,k,epsilon,n1,seed;
/// f cells filled for dr/qm only, sigma filled only when S > 1). Identical
/// resolved configs produce identical bytes on one platform.
void run_experiment(const ExperimentConfig& resolved, std::ostream& out);
std::string run_experiment_text(const ExperimentConfig& resolved);

struct TimingPoint {
  double t = 0.0;
  double seconds = 0.0;
};

struct TimingResult {
  std::vector<TimingPoint> points;
  double exponent = 0.0;
};

/// Wall time of full-curve runs (report stride forced to 1, single worker)
/// at each horizon: one warm-up run excluded, then the median of 3 timed
/// repetitions per horizon; fits the power-law exponent of seconds vs t.
/// Horizons must be ascending with at least 3 entries.
TimingResult time_scaling(const ExperimentConfig& base, const std::vector<double>& horizons);

/// Desk-scaled analogues of the four study figures. Writes one CSV per curve
/// plus <name>_manifest.txt under out_dir (created if missing) and returns
/// the paths written. scale in (0, 1] shrinks trajectory counts, ensemble
/// sizes, and dimension lists toward desk feasibility; scale = 1 attempts
/// the full published sizes.
std::vector<std::string> run_figure_preset(const std::string& name, double scale,
                                           const std::string& out_dir, std::uint64_t seed,
                                           int workers);

}  // namespace fidsim
