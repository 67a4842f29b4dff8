#include "fidsim/dynamics.hpp"

#include <cmath>

namespace fidsim {

namespace {
void check_point(const PhasePoint& x, const SystemSpec& spec) {
  if (x.q.size() != spec.dim || x.p.size() != spec.dim) {
    throw std::invalid_argument("phase point does not match system dimension");
  }
}

long long integer_kicks(double time) {
  const double r = std::round(time);
  if (time < 0.0 || std::abs(time - r) > 1e-9) {
    throw std::invalid_argument("rotor time must be a non-negative integer kick count");
  }
  return static_cast<long long>(r);
}
}  // namespace

PhasePoint rotor_step(const PhasePoint& x, const SystemSpec& spec, double strength,
                      Direction dir) {
  check_point(x, spec);
  PhasePoint out = x;
  rotor_step(std::span<double>(out.q), std::span<double>(out.p), spec.kick, strength, dir);
  return out;
}

PhasePoint sho_flow(const PhasePoint& x, const SystemSpec& spec, double strength,
                    double time) {
  check_point(x, spec);
  PhasePoint out = x;
  sho_step(std::span<double>(out.q), std::span<double>(out.p), spec, strength, time);
  return out;
}

double perturbation_value(std::span<const double> q, const SystemSpec& spec) {
  double v = 0.0;
  if (spec.kind == SystemKind::Rotor) {
    for (double qi : q) v -= std::cos(2.0 * qi);
  } else {
    for (double qi : q) v += qi;
  }
  return v;
}

double perturbation_value(const PhasePoint& x, const SystemSpec& spec) {
  if (x.q.size() != spec.dim) {
    throw std::invalid_argument("phase point does not match system dimension");
  }
  return perturbation_value(std::span<const double>(x.q), spec);
}

PhasePoint echo_point(const PhasePoint& x0, const SystemSpec& spec, double time) {
  check_point(x0, spec);
  PhasePoint out = x0;
  std::span<double> q(out.q);
  std::span<double> p(out.p);
  if (spec.kind == SystemKind::Rotor) {
    const long long steps = integer_kicks(time);
    for (long long t = 0; t < steps; ++t) {
      rotor_step(q, p, spec.kick, spec.epsilon, Direction::Forward);
    }
    for (long long t = 0; t < steps; ++t) {
      rotor_step(q, p, spec.kick, 0.0, Direction::Backward);
    }
  } else {
    if (time < 0.0) throw std::invalid_argument("echo time must be non-negative");
    sho_step(q, p, spec, spec.epsilon, time);
    sho_step(q, p, spec, 0.0, -time);
  }
  return out;
}

}  // namespace fidsim
