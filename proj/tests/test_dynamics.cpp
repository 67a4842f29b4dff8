#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fidsim/dynamics.hpp"

using fidsim::Direction;
using fidsim::PhasePoint;
using fidsim::SystemKind;
using fidsim::SystemSpec;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SystemSpec rotor_spec(std::size_t dim, double kick, double eps, std::uint32_t n1) {
  SystemSpec s;
  s.kind = SystemKind::Rotor;
  s.dim = dim;
  s.kick = kick;
  s.epsilon = eps;
  s.n1 = n1;
  return s;
}

SystemSpec sho_spec(std::size_t dim, double eps, double hbar) {
  SystemSpec s;
  s.kind = SystemKind::Sho;
  s.dim = dim;
  s.epsilon = eps;
  s.sho_hbar = hbar;
  return s;
}

// Independent integrator for H = p^2/2 + w^2 q^2/2 + s q (velocity Verlet).
void leapfrog(double& q, double& p, double w, double s, double t, int steps) {
  const double dt = t / steps;
  auto force = [&](double x) { return -(w * w * x + s); };
  for (int i = 0; i < steps; ++i) {
    const double half = p + 0.5 * dt * force(q);
    q += dt * half;
    p = half + 0.5 * dt * force(q);
  }
}

}  // namespace

TEST_CASE("angle wrap covers endpoints and negatives") {
  CHECK(fidsim::wrap_2pi(0.0) == 0.0);
  CHECK(fidsim::wrap_2pi(kTwoPi) == 0.0);
  CHECK(fidsim::wrap_2pi(-1e-18) < kTwoPi);
  CHECK(fidsim::wrap_2pi(-1e-18) >= 0.0);
  CHECK(fidsim::wrap_2pi(7.0) == doctest::Approx(7.0 - kTwoPi).epsilon(1e-15));
  CHECK(fidsim::wrap_2pi(-1.0) == doctest::Approx(kTwoPi - 1.0).epsilon(1e-15));
}

TEST_CASE("kicked map matches the frozen hand evaluation") {
  std::vector<double> q = {1.0}, p = {0.5};
  fidsim::rotor_step(q, p, 0.2, 0.01, Direction::Forward);
  CHECK(q[0] == doctest::Approx(1.5).epsilon(1e-16));
  CHECK(p[0] == doctest::Approx(0.29767860251799177).epsilon(1e-15));
}

TEST_CASE("backward map is the exact algebraic inverse") {
  std::vector<double> q = {1.0, 4.0, 5.9}, p = {0.5, -1.2, 3.3};
  const std::vector<double> q0 = q, p0 = p;
  for (int i = 0; i < 25; ++i) fidsim::rotor_step(q, p, 1.7, 0.3, Direction::Forward);
  for (int i = 0; i < 25; ++i) fidsim::rotor_step(q, p, 1.7, 0.3, Direction::Backward);
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(q[d] == doctest::Approx(q0[d]).epsilon(1e-10));
    CHECK(p[d] == doctest::Approx(p0[d]).epsilon(1e-10));
  }
}

TEST_CASE("oscillator step matches an independent integrator") {
  double q = 1.2, p = -0.4;
  double qr = q, pr = p;
  fidsim::sho_step_1d(q, p, 1.7, 0.35, 0.8);
  leapfrog(qr, pr, 1.7, 0.35, 0.8, 200000);
  CHECK(q == doctest::Approx(qr).epsilon(1e-8));
  CHECK(p == doctest::Approx(pr).epsilon(1e-8));
}

TEST_CASE("oscillator step conserves the shifted energy exactly") {
  const double w = 0.9, s = 0.25;
  double q = 0.7, p = 1.1;
  auto energy = [&](double qq, double pp) {
    return 0.5 * pp * pp + 0.5 * w * w * qq * qq + s * qq;
  };
  const double e0 = energy(q, p);
  for (int i = 0; i < 500; ++i) fidsim::sho_step_1d(q, p, w, s, 0.37);
  CHECK(energy(q, p) == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("oscillator flow is periodic with period 2 pi / omega") {
  const double w = 1.4;
  double q = 0.3, p = -0.8;
  fidsim::sho_step_1d(q, p, w, 0.6, kTwoPi / w);
  CHECK(q == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p == doctest::Approx(-0.8).epsilon(1e-12));
}

TEST_CASE("per-DOF frequencies broadcast and apply independently") {
  SystemSpec s = sho_spec(3, 0.0, 1.0);
  CHECK(s.omega_at(0) == 1.0);
  s.omega = {2.0};
  CHECK(s.omega_at(2) == 2.0);
  s.omega = {1.0, 2.0, 3.0};
  std::vector<double> q = {1.0, 1.0, 1.0}, p = {0.0, 0.0, 0.0};
  fidsim::sho_step(q, p, s, 0.0, kTwoPi);  // one full period of omega = 1
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(1.0).epsilon(1e-12));  // two full periods
  CHECK(q[2] == doctest::Approx(std::cos(3.0 * kTwoPi)).epsilon(1e-12));
}

TEST_CASE("perturbation is -sum cos 2q on the torus and sum q on the line") {
  std::vector<double> q = {0.5, 2.0};
  SystemSpec rotor = rotor_spec(2, 0.2, 0.0, 64);
  CHECK(fidsim::perturbation_value(q, rotor) ==
        doctest::Approx(-std::cos(1.0) - std::cos(4.0)).epsilon(1e-15));
  SystemSpec sho = sho_spec(2, 0.0, 1.0);
  CHECK(fidsim::perturbation_value(q, sho) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("planck constant comes from the grid on the torus") {
  SystemSpec rotor = rotor_spec(1, 0.2, 0.0, 64);
  CHECK(rotor.hbar() == doctest::Approx(kTwoPi / 64.0).epsilon(1e-16));
  rotor.n1 = 0;
  CHECK_THROWS_AS(rotor.hbar(), std::invalid_argument);
  SystemSpec sho = sho_spec(1, 0.0, 0.7);
  CHECK(sho.hbar() == 0.7);
}

TEST_CASE("echo endpoint reduces to the identity at zero perturbation") {
  PhasePoint x;
  x.q = {1.0, 2.5};
  x.p = {0.4, -0.9};
  SystemSpec rotor = rotor_spec(2, 1.3, 0.0, 128);
  PhasePoint back = fidsim::echo_point(x, rotor, 12.0);
  for (std::size_t d = 0; d < 2; ++d) {
    CHECK(back.q[d] == doctest::Approx(x.q[d]).epsilon(1e-10));
    CHECK(back.p[d] == doctest::Approx(x.p[d]).epsilon(1e-10));
  }
  SystemSpec sho = sho_spec(2, 0.0, 1.0);
  PhasePoint back2 = fidsim::echo_point(x, sho, 3.7);
  for (std::size_t d = 0; d < 2; ++d) {
    CHECK(back2.q[d] == doctest::Approx(x.q[d]).epsilon(1e-12));
    CHECK(back2.p[d] == doctest::Approx(x.p[d]).epsilon(1e-12));
  }
}

TEST_CASE("oscillator echo displacement follows the rotation geometry") {
  // Perturbed flow rotates about (-eps/w^2, 0), unperturbed about the origin:
  // the echo point is x0 + c(e^{iwt} - 1) in the a = q + ip/w plane.
  const double w = 1.3, eps = 0.4, t = 2.2;
  SystemSpec sho = sho_spec(1, eps, 1.0);
  sho.omega = {w};
  PhasePoint x;
  x.q = {0.9};
  x.p = {-0.2};
  PhasePoint e = fidsim::echo_point(x, sho, t);
  const double c = -eps / (w * w);
  const double dq = c * (std::cos(w * t) - 1.0);
  const double dp = w * c * std::sin(w * t);
  CHECK(e.q[0] - x.q[0] == doctest::Approx(dq).epsilon(1e-11));
  CHECK(e.p[0] - x.p[0] == doctest::Approx(dp).epsilon(1e-11));
}

TEST_CASE("echo endpoint on the torus requires integer kick counts") {
  PhasePoint x;
  x.q = {1.0};
  x.p = {0.5};
  SystemSpec rotor = rotor_spec(1, 0.2, 1e-3, 64);
  CHECK_THROWS_AS(fidsim::echo_point(x, rotor, 2.5), std::invalid_argument);
  CHECK_NOTHROW(fidsim::echo_point(x, rotor, 3.0));
}

TEST_CASE("flow label resolves the driving strength") {
  fidsim::FlowLabel label;
  label.hamiltonian = fidsim::HamiltonianChoice::Average;
  CHECK(label.strength(0.5) == 0.25);
  label.hamiltonian = fidsim::HamiltonianChoice::Perturbed;
  CHECK(label.strength(0.5) == 0.5);
  label.hamiltonian = fidsim::HamiltonianChoice::Unperturbed;
  CHECK(label.strength(0.5) == 0.0);
}
