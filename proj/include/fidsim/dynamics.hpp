#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "fidsim/phasespace.hpp"

namespace fidsim {

enum class SystemKind { Rotor, Sho };

/// Defines the dynamical system and its perturbation.
///
/// Rotor (per DOF, stroboscopic map with unit kick period):
///   q' = (q + p) mod 2*pi,   p' = p - kick*sin(q') - strength*2*sin(2*q')
/// derived from W(q) = -kick*cos(q) and perturbation V(q) = -cos(2*q);
/// hbar = 2*pi/n1 on the torus.
///
/// Oscillator (per DOF, continuous flow):
///   H = p^2/2 + omega_i^2 q^2/2 + strength*q,  perturbation V(q) = q.
struct SystemSpec {
  SystemKind kind = SystemKind::Rotor;
  std::size_t dim = 1;
  double kick = 0.0;
  double epsilon = 0.0;
  std::uint32_t n1 = 0;
  /// Per-DOF oscillator frequencies. Empty means all 1; a single entry
  /// broadcasts; otherwise the length must equal dim.
  std::vector<double> omega;
  double sho_hbar = 1.0;

  double omega_at(std::size_t i) const {
    if (omega.empty()) return 1.0;
    return omega.size() == 1 ? omega[0] : omega[i];
  }

  double hbar() const {
    if (kind == SystemKind::Rotor) {
      if (n1 == 0) throw std::invalid_argument("rotor spec requires n1 > 0");
      return 6.283185307179586476925286766559 / static_cast<double>(n1);
    }
    return sho_hbar;
  }
};

enum class Direction { Forward, Backward };

/// Which Hamiltonian drives a propagation leg. Strengths: unperturbed 0,
/// perturbed epsilon, average epsilon/2 (the interference trajectory).
enum class HamiltonianChoice { Unperturbed, Perturbed, Average };

struct FlowLabel {
  HamiltonianChoice hamiltonian = HamiltonianChoice::Unperturbed;
  Direction direction = Direction::Forward;

  double strength(double epsilon) const {
    switch (hamiltonian) {
      case HamiltonianChoice::Unperturbed: return 0.0;
      case HamiltonianChoice::Perturbed: return epsilon;
      case HamiltonianChoice::Average: return 0.5 * epsilon;
    }
    return 0.0;
  }
};

inline double wrap_2pi(double x) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  double w = x - two_pi * std::floor(x / two_pi);
  if (w >= two_pi) w -= two_pi;
  return w;
}

/// One kick period of the perturbed standard map; Backward applies the exact
/// algebraic inverse. Positions wrap, momenta do not.
inline void rotor_step(std::span<double> q, std::span<double> p, double kick,
                       double strength, Direction dir) {
  const std::size_t d = q.size();
  if (dir == Direction::Forward) {
    for (std::size_t i = 0; i < d; ++i) {
      const double qn = wrap_2pi(q[i] + p[i]);
      q[i] = qn;
      p[i] -= kick * std::sin(qn) + 2.0 * strength * std::sin(2.0 * qn);
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      const double pn = p[i] + kick * std::sin(q[i]) + 2.0 * strength * std::sin(2.0 * q[i]);
      p[i] = pn;
      q[i] = wrap_2pi(q[i] - pn);
    }
  }
}

PhasePoint rotor_step(const PhasePoint& x, const SystemSpec& spec, double strength,
                      Direction dir);

/// Exact flow of one displaced-oscillator DOF for signed time dt: a rotation
/// by omega*dt about the displaced center (-strength/omega^2, 0).
inline void sho_step_1d(double& q, double& p, double omega, double strength, double dt) {
  const double c = -strength / (omega * omega);
  const double cos_t = std::cos(omega * dt);
  const double sin_t = std::sin(omega * dt);
  const double u = q - c;
  const double pv = p;
  q = c + u * cos_t + (pv / omega) * sin_t;
  p = -omega * u * sin_t + pv * cos_t;
}

inline void sho_step(std::span<double> q, std::span<double> p, const SystemSpec& spec,
                     double strength, double dt) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    sho_step_1d(q[i], p[i], spec.omega_at(i), strength, dt);
  }
}

PhasePoint sho_flow(const PhasePoint& x, const SystemSpec& spec, double strength,
                    double time);

/// Perturbation V evaluated at q: sum_i -cos(2 q_i) (rotor), sum_i q_i (SHO).
double perturbation_value(std::span<const double> q, const SystemSpec& spec);
double perturbation_value(const PhasePoint& x, const SystemSpec& spec);

/// Echo endpoint x^-t = Phi_0^-t(Phi_eps^t(x0)). For the rotor, time counts
/// kicks and must be a non-negative integer.
PhasePoint echo_point(const PhasePoint& x0, const SystemSpec& spec, double time);

}  // namespace fidsim
