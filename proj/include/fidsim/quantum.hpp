#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/fft.hpp"
#include "fidsim/phasespace.hpp"

namespace fidsim {

/// Complex fidelity amplitude series on a shared time grid; F[j] = |f[j]|^2.
struct FidelitySeries {
  std::vector<double> times;
  std::vector<std::complex<double>> f;
  std::vector<double> F;
};

/// Wavefunction on the position grid q_m = 2*pi*m/n1 of one torus DOF,
/// normalized so that sum |psi_m|^2 * (2*pi/n1) = 1.
struct GridWavefunction {
  std::uint32_t n1 = 0;
  std::vector<std::complex<double>> amp;

  double hbar() const { return 6.283185307179586476925286766559 / n1; }
  double norm() const;
};

/// Grid state for one DOF of a (possibly multi-DOF) packet; the packet must
/// be resolvable (sigma_q >= 3 grid spacings) and narrow (sigma_q <= 2*pi/10).
GridWavefunction discretize_gwp(const GaussianWavepacket& state, std::size_t dof,
                                std::uint32_t n1);

/// One kick period of the quantum rotor at a given perturbation strength:
/// free rotation exp(-i*hbar*l^2/2) on the momentum ladder, then the kick
/// phase exp(+i*(kick*cos q + strength*cos 2q)/hbar). The factorization is
/// exact for delta kicks; the order matches the classical map (drift, then
/// kick at the new position). The momentum ladder l runs over
/// [l_center - n1/2, l_center + n1/2) to keep the packet alias-free.
class RotorPropagator {
 public:
  RotorPropagator(std::uint32_t n1, double kick, double strength, double p_center);

  void step(GridWavefunction& psi) const;
  void step_inverse(GridWavefunction& psi) const;

 private:
  Fft fft_;
  std::vector<std::complex<double>> free_phase_;
  std::vector<std::complex<double>> kick_phase_;
};

/// f_QM(t) = <psi_eps(t)|psi_0(t)> for one DOF, t = 0..t_max kicks.
std::vector<std::complex<double>> qm_fidelity_1d(const GaussianWavepacket& state,
                                                 std::size_t dof, const SystemSpec& spec,
                                                 std::size_t t_max);

/// Product law for uncoupled DOFs: f = prod_i f_i on a shared time grid.
FidelitySeries qm_fidelity_product(const std::vector<std::vector<std::complex<double>>>&
                                       per_dim,
                                   const std::vector<double>& times);

/// Full rotor quantum fidelity: per-DOF 1D runs multiplied together.
FidelitySeries qm_fidelity_rotor(const GaussianWavepacket& state, const SystemSpec& spec,
                                 std::size_t t_max);

/// Closed-form displaced-SHO fidelity amplitude for coherent-width packets;
/// non-coherent widths fall back to 1D grid split-step propagation.
FidelitySeries sho_qm_fidelity(const GaussianWavepacket& state, const SystemSpec& spec,
                               const std::vector<double>& times);

/// Grid-splitting SHO propagation on a truncated line (validation path).
std::vector<std::complex<double>> sho_qm_fidelity_grid_1d(const GaussianWavepacket& state,
                                                          std::size_t dof,
                                                          const SystemSpec& spec,
                                                          const std::vector<double>& times,
                                                          std::size_t grid_size = 4096,
                                                          double dt = 1e-3);

}  // namespace fidsim
