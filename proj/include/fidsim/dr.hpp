#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/phasespace.hpp"
#include "fidsim/run_options.hpp"

namespace fidsim {

/// Dephasing-representation amplitude series. F[j] = |f[j]|^2 exactly and
/// f[0] = 1 exactly (all phases vanish at t = 0). sigma_f is the exact
/// single-run error law sqrt((1-F)/N); sigma_F is the self-consistent
/// estimate of the fidelity estimator's error built from the empirical
/// phase-factor moments of the same run.
struct DrSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> f;
  std::vector<double> F;
  std::vector<double> sigma_f;
  std::vector<double> sigma_F;
  std::uint64_t N = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo average of exp(i*phi) over Wigner-sampled trajectories driven
/// by the average Hamiltonian (strength epsilon/2), with
/// phi = (epsilon/hbar) * integral of V along the trajectory. One pass per
/// trajectory: cost is linear in t_max. Rotor time counts kicks (phi gains
/// (epsilon/hbar)*V(q) after each kick); SHO time advances in steps of
/// opts.dt with the V integral accumulated in closed form per step (or by
/// trapezoid quadrature when opts.sho_phase_quadrature is set).
DrSeries run_dr(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                std::uint64_t N, std::uint64_t seed, const RunOptions& opts = {});

/// Per-trajectory phases phi_j at a single time, for the empirical
/// trajectory-count predictor.
std::vector<double> dr_phases(const GaussianWavepacket& state, const SystemSpec& spec,
                              double time, std::uint64_t N, std::uint64_t seed,
                              const RunOptions& opts = {});

/// Trajectory counts needed to reach statistical error sigma:
/// for the amplitude, N = sigma^-2 (1-F);
double predict_n_f(double sigma, double F);
/// for the fidelity, the general bound N <= 4 sigma^-2 F (1-F);
double predict_n_F_bound(double sigma, double F);
/// the normal-phase closed form N = 2 sigma^-2 F (1-F)^2;
double predict_n_F_normal(double sigma, double F);
/// and the general expression evaluated on an empirical phase sample,
/// N = (2/sigma^2) [Re(<e^{i2phi}><e^{-iphi}>^2) + F - 2F^2].
double predict_n_F_general(std::span<const double> phases, double sigma);

}  // namespace fidsim
