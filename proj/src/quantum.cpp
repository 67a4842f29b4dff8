#include "fidsim/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/kahan.hpp"

namespace fidsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

std::complex<double> polar_unit(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

void check_dof(const GaussianWavepacket& state, std::size_t dof) {
  if (dof >= state.dim()) throw std::invalid_argument("DOF index out of range");
}
}  // namespace

double GridWavefunction::norm() const {
  KahanSum s;
  for (const auto& a : amp) s.add(std::norm(a));
  return std::sqrt(s.value() * (kTwoPi / static_cast<double>(n1)));
}

GridWavefunction discretize_gwp(const GaussianWavepacket& state, std::size_t dof,
                                std::uint32_t n1) {
  check_dof(state, dof);
  if (n1 == 0 || (n1 & (n1 - 1)) != 0) {
    throw std::invalid_argument("n1 must be a power of two");
  }
  const double dq = kTwoPi / static_cast<double>(n1);
  const double sigma = state.sigma_q[dof];
  if (sigma < 3.0 * dq) {
    throw std::invalid_argument("sigma_q is below 3 grid spacings: grid cannot resolve the packet");
  }
  if (sigma > kTwoPi / 10.0) {
    throw std::invalid_argument("sigma_q exceeds 2*pi/10: packet wraps around the torus");
  }
  const double qc = state.q_center[dof];
  const double pc = state.p_center[dof];
  const double hbar = kTwoPi / static_cast<double>(n1);
  GridWavefunction psi;
  psi.n1 = n1;
  psi.amp.resize(n1);
  for (std::uint32_t m = 0; m < n1; ++m) {
    // Nearest-image displacement keeps centers near the cell edge valid.
    double d = static_cast<double>(m) * dq - qc;
    d -= kTwoPi * std::round(d / kTwoPi);
    const double mag = std::exp(-d * d / (4.0 * sigma * sigma));
    psi.amp[m] = mag * polar_unit(pc * d / hbar);
  }
  const double nrm = psi.norm();
  for (auto& a : psi.amp) a /= nrm;
  return psi;
}

RotorPropagator::RotorPropagator(std::uint32_t n1, double kick, double strength,
                                 double p_center)
    : fft_(n1) {
  const double hbar = kTwoPi / static_cast<double>(n1);
  const auto n = static_cast<long long>(n1);
  const long long l_center = std::llround(p_center / hbar);
  const long long l_base = l_center - n / 2;
  free_phase_.resize(n1);
  for (long long j = 0; j < n; ++j) {
    // Ladder index congruent to the DFT bin, inside [l_base, l_base + n).
    long long offset = (j - l_base) % n;
    if (offset < 0) offset += n;
    const long long l = l_base + offset;
    // hbar*l^2/2 = pi*l^2/n1; reduce l^2 mod 2*n1 in integers so the phase
    // stays exact for large l.
    long long r = l % (2 * n);
    if (r < 0) r += 2 * n;
    const long long sq = (r * r) % (2 * n);
    free_phase_[static_cast<std::size_t>(j)] =
        polar_unit(-kPi * static_cast<double>(sq) / static_cast<double>(n));
  }
  kick_phase_.resize(n1);
  for (std::uint32_t m = 0; m < n1; ++m) {
    const double q = kTwoPi * static_cast<double>(m) / static_cast<double>(n1);
    kick_phase_[m] = polar_unit((kick * std::cos(q) + strength * std::cos(2.0 * q)) / hbar);
  }
}

void RotorPropagator::step(GridWavefunction& psi) const {
  if (psi.amp.size() != fft_.size()) throw std::invalid_argument("grid size mismatch");
  fft_.forward(psi.amp.data());
  for (std::size_t j = 0; j < psi.amp.size(); ++j) psi.amp[j] *= free_phase_[j];
  fft_.inverse(psi.amp.data());
  for (std::size_t m = 0; m < psi.amp.size(); ++m) psi.amp[m] *= kick_phase_[m];
}

void RotorPropagator::step_inverse(GridWavefunction& psi) const {
  if (psi.amp.size() != fft_.size()) throw std::invalid_argument("grid size mismatch");
  for (std::size_t m = 0; m < psi.amp.size(); ++m) {
    psi.amp[m] *= std::conj(kick_phase_[m]);
  }
  fft_.forward(psi.amp.data());
  for (std::size_t j = 0; j < psi.amp.size(); ++j) {
    psi.amp[j] *= std::conj(free_phase_[j]);
  }
  fft_.inverse(psi.amp.data());
}

namespace {
std::complex<double> grid_overlap(const GridWavefunction& a, const GridWavefunction& b) {
  KahanComplexSum s;
  for (std::size_t m = 0; m < a.amp.size(); ++m) s.add(std::conj(a.amp[m]) * b.amp[m]);
  return s.value() * (kTwoPi / static_cast<double>(a.n1));
}
}  // namespace

std::vector<std::complex<double>> qm_fidelity_1d(const GaussianWavepacket& state,
                                                 std::size_t dof, const SystemSpec& spec,
                                                 std::size_t t_max) {
  if (spec.kind != SystemKind::Rotor) {
    throw std::invalid_argument("qm_fidelity_1d requires a rotor spec");
  }
  check_dof(state, dof);
  GridWavefunction psi0 = discretize_gwp(state, dof, spec.n1);
  GridWavefunction psie = psi0;
  const RotorPropagator prop0(spec.n1, spec.kick, 0.0, state.p_center[dof]);
  const RotorPropagator prope(spec.n1, spec.kick, spec.epsilon, state.p_center[dof]);
  std::vector<std::complex<double>> f(t_max + 1);
  f[0] = grid_overlap(psie, psi0);
  for (std::size_t t = 1; t <= t_max; ++t) {
    prop0.step(psi0);
    prope.step(psie);
    f[t] = grid_overlap(psie, psi0);
  }
  return f;
}

FidelitySeries qm_fidelity_product(
    const std::vector<std::vector<std::complex<double>>>& per_dim,
    const std::vector<double>& times) {
  if (per_dim.empty()) throw std::invalid_argument("no per-dimension series");
  for (const auto& series : per_dim) {
    if (series.size() != times.size()) {
      throw std::invalid_argument("per-dimension series do not share the time grid");
    }
  }
  FidelitySeries out;
  out.times = times;
  out.f.assign(times.size(), {1.0, 0.0});
  out.F.resize(times.size());
  for (const auto& series : per_dim) {
    for (std::size_t j = 0; j < times.size(); ++j) out.f[j] *= series[j];
  }
  for (std::size_t j = 0; j < times.size(); ++j) out.F[j] = std::norm(out.f[j]);
  return out;
}

FidelitySeries qm_fidelity_rotor(const GaussianWavepacket& state, const SystemSpec& spec,
                                 std::size_t t_max) {
  std::vector<double> times(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) times[t] = static_cast<double>(t);
  std::vector<std::vector<std::complex<double>>> per_dim;
  per_dim.reserve(spec.dim);
  for (std::size_t i = 0; i < spec.dim; ++i) {
    // Identical DOFs share one propagation.
    if (i > 0 && state.q_center[i] == state.q_center[i - 1] &&
        state.p_center[i] == state.p_center[i - 1] &&
        state.sigma_q[i] == state.sigma_q[i - 1]) {
      per_dim.push_back(per_dim.back());
      continue;
    }
    per_dim.push_back(qm_fidelity_1d(state, i, spec, t_max));
  }
  return qm_fidelity_product(per_dim, times);
}

namespace {
/// <beta|gamma> for coherent states: exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta)*gamma).
std::complex<double> coherent_overlap(std::complex<double> beta, std::complex<double> gamma) {
  return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma);
}

std::complex<double> sho_f_closed_1d(double q_center, double p_center, double omega,
                                     double hbar, double eps, double t) {
  const std::complex<double> i_unit(0.0, 1.0);
  const double scale = std::sqrt(omega / (2.0 * hbar));
  const std::complex<double> alpha = scale * std::complex<double>(q_center, p_center / omega);
  const double delta = -(eps / (omega * omega)) * scale;
  const double e_shift = -eps * eps / (2.0 * omega * omega);
  const std::complex<double> rot = polar_unit(-omega * t);
  const std::complex<double> w = (alpha - delta) * rot;
  const std::complex<double> phase =
      std::exp(i_unit * (e_shift * t / hbar)) *
      std::exp(-i_unit * (delta * (alpha.imag() - w.imag())));
  return phase * coherent_overlap(delta + w, alpha * rot);
}

bool is_coherent_width(const GaussianWavepacket& state, const SystemSpec& spec) {
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double want = std::sqrt(0.5 * state.hbar / spec.omega_at(i));
    if (std::abs(state.sigma_q[i] - want) > 1e-12 * want) return false;
  }
  return true;
}
}  // namespace

std::vector<std::complex<double>> sho_qm_fidelity_grid_1d(const GaussianWavepacket& state,
                                                          std::size_t dof,
                                                          const SystemSpec& spec,
                                                          const std::vector<double>& times,
                                                          std::size_t grid_size, double dt) {
  check_dof(state, dof);
  if (spec.kind != SystemKind::Sho) {
    throw std::invalid_argument("sho_qm_fidelity_grid_1d requires an SHO spec");
  }
  const double hbar = state.hbar;
  const double omega = spec.omega_at(dof);
  const double eps = spec.epsilon;
  const double qc = state.q_center[dof];
  const double pc = state.p_center[dof];
  const double sigma = state.sigma_q[dof];
  const double reach = std::abs(qc) + std::abs(pc) / omega +
                       2.0 * std::abs(eps) / (omega * omega) + 12.0 * sigma + 2.0;
  const double box = 2.0 * reach;
  const auto n = grid_size;
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid_size must be a power of two");
  }
  const double dx = box / static_cast<double>(n);
  const Fft fft(n);

  std::vector<std::complex<double>> psi0(n), psie(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = -0.5 * box + static_cast<double>(m) * dx;
    const double d = x - qc;
    psi0[m] = std::exp(-d * d / (4.0 * sigma * sigma)) * polar_unit(pc * d / hbar);
  }
  {
    double nrm2 = 0.0;
    for (const auto& a : psi0) nrm2 += std::norm(a);
    const double nrm = std::sqrt(nrm2 * dx);
    for (auto& a : psi0) a /= nrm;
  }
  psie = psi0;

  // Half-step kinetic factors on the FFT frequency ladder, full-step
  // potential factors for strengths 0 and eps (Strang splitting).
  std::vector<std::complex<double>> kin_half(n), pot0(n), pote(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jj = j < n / 2 ? static_cast<double>(j)
                                : static_cast<double>(j) - static_cast<double>(n);
    const double kappa = kTwoPi * jj / box;
    kin_half[j] = polar_unit(-0.25 * hbar * kappa * kappa * dt);
  }
  for (std::size_t m = 0; m < n; ++m) {
    const double x = -0.5 * box + static_cast<double>(m) * dx;
    const double v0 = 0.5 * omega * omega * x * x;
    pot0[m] = polar_unit(-v0 * dt / hbar);
    pote[m] = polar_unit(-(v0 + eps * x) * dt / hbar);
  }
  auto split_advance = [&](std::vector<std::complex<double>>& psi,
                           const std::vector<std::complex<double>>& pot) {
    fft.forward(psi.data());
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kin_half[j];
    fft.inverse(psi.data());
    for (std::size_t m = 0; m < n; ++m) psi[m] *= pot[m];
    fft.forward(psi.data());
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kin_half[j];
    fft.inverse(psi.data());
  };
  auto overlap = [&]() {
    KahanComplexSum s;
    for (std::size_t m = 0; m < n; ++m) s.add(std::conj(psie[m]) * psi0[m]);
    return s.value() * dx;
  };

  std::vector<std::complex<double>> f(times.size());
  long long done = 0;
  for (std::size_t idx = 0; idx < times.size(); ++idx) {
    if (times[idx] < 0.0) throw std::invalid_argument("times must be non-negative");
    const long long want = std::llround(times[idx] / dt);
    if (want < done) throw std::invalid_argument("times must be non-decreasing");
    for (; done < want; ++done) {
      split_advance(psi0, pot0);
      split_advance(psie, pote);
    }
    f[idx] = overlap();
  }
  return f;
}

FidelitySeries sho_qm_fidelity(const GaussianWavepacket& state, const SystemSpec& spec,
                               const std::vector<double>& times) {
  if (spec.kind != SystemKind::Sho) {
    throw std::invalid_argument("sho_qm_fidelity requires an SHO spec");
  }
  if (state.dim() != spec.dim) {
    throw std::invalid_argument("state does not match system dimension");
  }
  FidelitySeries out;
  out.times = times;
  out.f.assign(times.size(), {1.0, 0.0});
  out.F.resize(times.size());
  const bool coherent = is_coherent_width(state, spec);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (coherent) {
      for (std::size_t j = 0; j < times.size(); ++j) {
        out.f[j] *= sho_f_closed_1d(state.q_center[i], state.p_center[i], spec.omega_at(i),
                                    state.hbar, spec.epsilon, times[j]);
      }
    } else {
      const auto f1 = sho_qm_fidelity_grid_1d(state, i, spec, times);
      for (std::size_t j = 0; j < times.size(); ++j) out.f[j] *= f1[j];
    }
  }
  for (std::size_t j = 0; j < times.size(); ++j) out.F[j] = std::norm(out.f[j]);
  return out;
}

}  // namespace fidsim
