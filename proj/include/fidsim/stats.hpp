#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/phasespace.hpp"
#include "fidsim/run_options.hpp"

namespace fidsim {

/// One estimator run on a fixed report grid. f is empty for real-valued
/// estimators (the classical family); the interference estimator fills it.
struct SeriesSample {
  std::vector<double> times;
  std::vector<double> F;
  std::vector<std::complex<double>> f;
};

/// Produces ensemble member `member` with the shared base seed. Members must
/// use disjoint randomness (the engines' RunOptions::ensemble field) and the
/// same report grid.
using SeriesRunner = std::function<SeriesSample(std::uint64_t seed, std::uint32_t member)>;

/// Scatter of an estimator across S independent runs, per report time.
/// sigma_F is the unbiased standard deviation of F; sigma_F_se is the
/// standard error of sigma_F itself (fourth-moment formula, with the normal
/// approximation sigma/sqrt(2(S-1)) as a degenerate-case fallback).
/// sigma_f is the complex scatter sqrt(sum|f_m - mean|^2/(S-1)), empty when
/// the estimator has no amplitude.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_F;
  std::vector<double> sigma_F;
  std::vector<double> sigma_F_se;
  std::vector<std::complex<double>> mean_f;
  std::vector<double> sigma_f;
  std::size_t S = 0;
};

EnsembleStats ensemble_error(const SeriesRunner& runner, std::size_t S, std::uint64_t seed);

/// Least-squares fit of ln(sigma^2) = ln(alpha) + D ln(beta) over (D, sigma)
/// pairs: the per-DOF error growth factor. significant means the slope
/// exceeds twice its standard error.
struct BetaFit {
  double beta = 1.0;
  double alpha = 0.0;
  double beta_se = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  bool significant = false;
};

BetaFit fit_beta(std::span<const double> dims, std::span<const double> sigmas);

/// Trajectories needed to reach sigma_target given a run of n_used
/// trajectories that measured sigma_measured (1/sqrt(N) scaling).
double required_n(double n_used, double sigma_measured, double sigma_target);

/// Report time on the interference-estimator pilot curve whose F lands
/// closest to target_F, scanning up to t_max.
struct MatchedTime {
  double time = 0.0;
  double F = 1.0;
};

MatchedTime find_time_for_fidelity(const GaussianWavepacket& state, const SystemSpec& spec,
                                   double target_F, double t_max, std::uint64_t N,
                                   std::uint64_t seed, const RunOptions& opts = {});

}  // namespace fidsim
