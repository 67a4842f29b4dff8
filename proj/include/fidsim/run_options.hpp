#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fidsim {

/// Default SHO time step: 50 samples per period at omega = 1.
constexpr double kDefaultShoDt = 0.12566370614359172953850573533118;

/// Options shared by the Monte Carlo engines. Results are independent of
/// `workers`; `ensemble` offsets every trajectory stream so ensemble members
/// are disjoint and individually reproducible.
struct RunOptions {
  int workers = 1;
  std::size_t report_stride = 1;
  double dt = kDefaultShoDt;
  std::uint32_t ensemble = 0;
  bool sho_phase_quadrature = false;
};

/// Step indices at which a series is reported: multiples of stride plus the
/// final step.
inline std::vector<std::size_t> report_steps(std::size_t t_steps, std::size_t stride) {
  if (stride == 0) stride = 1;
  std::vector<std::size_t> steps;
  for (std::size_t t = 0; t <= t_steps; t += stride) steps.push_back(t);
  if (steps.back() != t_steps) steps.push_back(t_steps);
  return steps;
}

}  // namespace fidsim
