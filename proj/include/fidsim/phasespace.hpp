#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fidsim/rng.hpp"

namespace fidsim {

/// A point in 2D-dimensional phase space. Positions are angles for the
/// kicked rotor (wrapped into [0, 2*pi) by the map) and unbounded for the
/// oscillator; momenta are never wrapped.
struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;

  std::size_t dim() const { return q.size(); }
};

/// Product Gaussian wavepacket determined by per-DOF centers and position
/// widths. Its Wigner function is the product of per-DOF Gaussians with
/// position variance sigma_q^2 and momentum variance hbar^2/(4 sigma_q^2),
/// normalized so that h^-D * integral(rho_W) = 1 and max(rho_W) = 2^D.
struct GaussianWavepacket {
  std::vector<double> q_center;
  std::vector<double> p_center;
  std::vector<double> sigma_q;
  double hbar = 1.0;

  std::size_t dim() const { return q_center.size(); }
  double sigma_p(std::size_t i) const { return 0.5 * hbar / sigma_q[i]; }

  /// Minimum-uncertainty packet with sigma_q = sqrt(hbar/(2*omega)) in every
  /// DOF (omega = 1 gives the rotor noise-floor width sqrt(hbar/2)).
  static GaussianWavepacket coherent(std::size_t dim, double hbar, double q_center,
                                     double p_center, double omega = 1.0);
};

/// log(rho_W) at x; sums per-DOF terms, so it stays finite where rho_W
/// underflows. No torus wrapping is applied: packets are assumed narrow
/// relative to the cell, which config validation enforces.
double wigner_log_density(const GaussianWavepacket& state, std::span<const double> q,
                          std::span<const double> p);
double wigner_log_density(const GaussianWavepacket& state, const PhasePoint& x);

/// rho_W(x), in (0, 2^D] (0 when the exponential underflows).
double wigner_density(const GaussianWavepacket& state, const PhasePoint& x);

/// Normalization constant I_M = h^-D * integral(W_M) for the importance
/// weight W_M = rho_W^M: (2^(M-1)/M)^D for M > 0. M = 0 is the uniform
/// torus-cell weight and requires n1 (the per-DOF Hilbert-space size),
/// giving n1^D.
double norm_factor(const GaussianWavepacket& state, double power, std::uint32_t n1 = 0);

/// Draws one point per call; each trajectory uses its own counter stream.
/// Draw order is fixed (q_i then p_i for each DOF in turn) and is part of
/// the reproducibility contract.
void draw_power_density(const GaussianWavepacket& state, double power, CounterRng& rng,
                        std::span<double> q, std::span<double> p);
void draw_wigner(const GaussianWavepacket& state, CounterRng& rng, std::span<double> q,
                 std::span<double> p);

/// Uniform draw over one torus cell: q_i on [0, 2*pi), p_i on
/// [p_center_i - pi, p_center_i + pi).
void draw_uniform_cell(const GaussianWavepacket& state, CounterRng& rng,
                       std::span<double> q, std::span<double> p);

/// Batch samplers used by tests and small studies; trajectory j of
/// sample_* equals trajectory j of any engine run with the same seed.
std::vector<PhasePoint> sample_wigner(const GaussianWavepacket& state, std::size_t n,
                                      std::uint64_t seed);
std::vector<PhasePoint> sample_power_density(const GaussianWavepacket& state, double power,
                                             std::size_t n, std::uint64_t seed);

}  // namespace fidsim
