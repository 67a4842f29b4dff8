#include "fidsim/phasespace.hpp"

#include <cmath>
#include <stdexcept>

namespace fidsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLn2 = 0.69314718055994530941723212145818;

void check_state(const GaussianWavepacket& state) {
  const std::size_t d = state.q_center.size();
  if (d == 0) throw std::invalid_argument("wavepacket has zero dimensions");
  if (state.p_center.size() != d || state.sigma_q.size() != d) {
    throw std::invalid_argument("wavepacket field lengths disagree");
  }
  if (state.hbar <= 0.0) throw std::invalid_argument("hbar must be positive");
  for (double s : state.sigma_q) {
    if (s <= 0.0) throw std::invalid_argument("sigma_q must be positive");
  }
}
}  // namespace

GaussianWavepacket GaussianWavepacket::coherent(std::size_t dim, double hbar,
                                                double q_center, double p_center,
                                                double omega) {
  if (dim == 0) throw std::invalid_argument("wavepacket has zero dimensions");
  if (hbar <= 0.0 || omega <= 0.0) {
    throw std::invalid_argument("hbar and omega must be positive");
  }
  GaussianWavepacket state;
  state.q_center.assign(dim, q_center);
  state.p_center.assign(dim, p_center);
  state.sigma_q.assign(dim, std::sqrt(0.5 * hbar / omega));
  state.hbar = hbar;
  return state;
}

double wigner_log_density(const GaussianWavepacket& state, std::span<const double> q,
                          std::span<const double> p) {
  const std::size_t d = state.dim();
  if (q.size() != d || p.size() != d) {
    throw std::invalid_argument("phase point dimension mismatch");
  }
  double log_rho = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double dq = q[i] - state.q_center[i];
    const double dp = p[i] - state.p_center[i];
    const double s2 = state.sigma_q[i] * state.sigma_q[i];
    log_rho += kLn2 - 0.5 * dq * dq / s2 - 2.0 * s2 * dp * dp / (state.hbar * state.hbar);
  }
  return log_rho;
}

double wigner_log_density(const GaussianWavepacket& state, const PhasePoint& x) {
  return wigner_log_density(state, std::span<const double>(x.q),
                            std::span<const double>(x.p));
}

double wigner_density(const GaussianWavepacket& state, const PhasePoint& x) {
  return std::exp(wigner_log_density(state, x));
}

double norm_factor(const GaussianWavepacket& state, double power, std::uint32_t n1) {
  check_state(state);
  if (power < 0.0) throw std::invalid_argument("weight power must be non-negative");
  const double d = static_cast<double>(state.dim());
  if (power == 0.0) {
    if (n1 == 0) {
      throw std::invalid_argument("uniform-cell weight requires the torus size n1");
    }
    return std::pow(static_cast<double>(n1), d);
  }
  return std::pow(std::exp2(power - 1.0) / power, d);
}

void draw_power_density(const GaussianWavepacket& state, double power, CounterRng& rng,
                        std::span<double> q, std::span<double> p) {
  const std::size_t d = state.dim();
  if (power <= 0.0) throw std::invalid_argument("draw_power_density requires power > 0");
  const double shrink = 1.0 / std::sqrt(power);
  for (std::size_t i = 0; i < d; ++i) {
    const double sq = state.sigma_q[i] * shrink;
    const double sp = state.sigma_p(i) * shrink;
    q[i] = state.q_center[i] + sq * rng.normal();
    p[i] = state.p_center[i] + sp * rng.normal();
  }
}

void draw_wigner(const GaussianWavepacket& state, CounterRng& rng, std::span<double> q,
                 std::span<double> p) {
  draw_power_density(state, 1.0, rng, q, p);
}

void draw_uniform_cell(const GaussianWavepacket& state, CounterRng& rng,
                       std::span<double> q, std::span<double> p) {
  const std::size_t d = state.dim();
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = kTwoPi * rng.uniform01();
    p[i] = state.p_center[i] + kTwoPi * (rng.uniform01() - 0.5);
  }
}

namespace {
template <typename DrawFn>
std::vector<PhasePoint> sample_batch(const GaussianWavepacket& state, std::size_t n,
                                     std::uint64_t seed, DrawFn&& draw) {
  check_state(state);
  const std::size_t d = state.dim();
  std::vector<PhasePoint> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    CounterRng rng(seed, make_stream(j, 0, 0));
    out[j].q.resize(d);
    out[j].p.resize(d);
    draw(rng, std::span<double>(out[j].q), std::span<double>(out[j].p));
  }
  return out;
}
}  // namespace

std::vector<PhasePoint> sample_wigner(const GaussianWavepacket& state, std::size_t n,
                                      std::uint64_t seed) {
  return sample_batch(state, n, seed, [&](CounterRng& rng, std::span<double> q,
                                          std::span<double> p) {
    draw_wigner(state, rng, q, p);
  });
}

std::vector<PhasePoint> sample_power_density(const GaussianWavepacket& state, double power,
                                             std::size_t n, std::uint64_t seed) {
  if (power == 0.0) {
    return sample_batch(state, n, seed, [&](CounterRng& rng, std::span<double> q,
                                            std::span<double> p) {
      draw_uniform_cell(state, rng, q, p);
    });
  }
  return sample_batch(state, n, seed, [&](CounterRng& rng, std::span<double> q,
                                          std::span<double> p) {
    draw_power_density(state, power, rng, q, p);
  });
}

}  // namespace fidsim
