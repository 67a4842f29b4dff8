#include "fidsim/dr.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/detail/engine.hpp"
#include "fidsim/kahan.hpp"
#include "fidsim/parallel.hpp"

namespace fidsim {

namespace {

using detail::check_run;
using detail::report_times;
using detail::total_steps;

/// Integral of sum_i q_i over one dt of the exact strength-s flow, evaluated
/// before the state is advanced.
double sho_action_increment(std::span<const double> q, std::span<const double> p,
                            const SystemSpec& spec, double strength, double dt) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double omega = spec.omega_at(i);
    const double c = -strength / (omega * omega);
    const double sin_t = std::sin(omega * dt);
    const double cos_t = std::cos(omega * dt);
    const double u = q[i] - c;
    acc += c * dt + (u / omega) * sin_t + (p[i] / (omega * omega)) * (1.0 - cos_t);
  }
  return acc;
}

struct PhaseAccum {
  std::vector<KahanComplexSum> c1;
  std::vector<KahanComplexSum> c2;
};

/// Drives one trajectory, invoking report(report_index, phi) on the report
/// grid, with phi the accumulated DR phase.
template <typename ReportFn>
void trajectory_phases(const GaussianWavepacket& state, const SystemSpec& spec,
                       std::size_t t_steps, const std::vector<std::size_t>& reports,
                       std::uint64_t seed, std::uint64_t traj, const RunOptions& opts,
                       std::vector<double>& q, std::vector<double>& p, ReportFn&& report) {
  CounterRng rng(seed, make_stream(traj, 0, opts.ensemble));
  draw_wigner(state, rng, q, p);
  const double eps_over_hbar = spec.epsilon / spec.hbar();
  const double half = 0.5 * spec.epsilon;
  double action = 0.0;
  std::size_t next_report = 0;
  if (reports[next_report] == 0) {
    report(next_report, 0.0);
    ++next_report;
  }
  for (std::size_t t = 1; t <= t_steps; ++t) {
    if (spec.kind == SystemKind::Rotor) {
      rotor_step(std::span<double>(q), std::span<double>(p), spec.kick, half,
                 Direction::Forward);
      action += perturbation_value(std::span<const double>(q), spec);
    } else {
      if (opts.sho_phase_quadrature) {
        const double before = perturbation_value(std::span<const double>(q), spec);
        sho_step(std::span<double>(q), std::span<double>(p), spec, half, opts.dt);
        const double after = perturbation_value(std::span<const double>(q), spec);
        action += 0.5 * (before + after) * opts.dt;
      } else {
        action += sho_action_increment(std::span<const double>(q),
                                       std::span<const double>(p), spec, half, opts.dt);
        sho_step(std::span<double>(q), std::span<double>(p), spec, half, opts.dt);
      }
    }
    if (next_report < reports.size() && reports[next_report] == t) {
      report(next_report, eps_over_hbar * action);
      ++next_report;
    }
  }
}

}  // namespace

DrSeries run_dr(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                std::uint64_t N, std::uint64_t seed, const RunOptions& opts) {
  check_run(state, spec, t_max, N);
  const std::size_t t_steps = total_steps(spec, t_max, opts.dt);
  const auto reports = report_steps(t_steps, opts.report_stride);
  const std::size_t nrep = reports.size();
  const std::size_t nblocks = block_count(N);

  std::vector<PhaseAccum> acc(nblocks);
  for_each_block(N, opts.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    acc[b].c1.resize(nrep);
    acc[b].c2.resize(nrep);
    std::vector<double> q(spec.dim), p(spec.dim);
    for (std::size_t j = lo; j < hi; ++j) {
      trajectory_phases(state, spec, t_steps, reports, seed, j, opts, q, p,
                        [&](std::size_t r, double phi) {
                          acc[b].c1[r].add({std::cos(phi), std::sin(phi)});
                          acc[b].c2[r].add({std::cos(2.0 * phi), std::sin(2.0 * phi)});
                        });
    }
  });

  DrSeries out;
  out.times = report_times(spec, reports, opts.dt);
  out.f.resize(nrep);
  out.F.resize(nrep);
  out.sigma_f.resize(nrep);
  out.sigma_F.resize(nrep);
  out.N = N;
  out.seed = seed;
  const double n = static_cast<double>(N);
  for (std::size_t r = 0; r < nrep; ++r) {
    KahanComplexSum c1, c2;
    for (std::size_t b = 0; b < nblocks; ++b) {
      c1.merge(acc[b].c1[r]);
      c2.merge(acc[b].c2[r]);
    }
    const std::complex<double> f = c1.value() / n;
    const std::complex<double> m2 = c2.value() / n;
    const double F = std::norm(f);
    out.f[r] = f;
    out.F[r] = F;
    out.sigma_f[r] = std::sqrt(std::max(0.0, 1.0 - F) / n);
    const double bracket = (m2 * std::conj(f) * std::conj(f)).real() + F - 2.0 * F * F;
    out.sigma_F[r] = std::sqrt(std::max(0.0, 2.0 * bracket / n));
  }
  return out;
}

std::vector<double> dr_phases(const GaussianWavepacket& state, const SystemSpec& spec,
                              double time, std::uint64_t N, std::uint64_t seed,
                              const RunOptions& opts) {
  check_run(state, spec, time, N);
  const std::size_t t_steps = total_steps(spec, time, opts.dt);
  const std::vector<std::size_t> reports{t_steps};
  std::vector<double> phases(N);
  for_each_block(N, opts.workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<double> q(spec.dim), p(spec.dim);
    for (std::size_t j = lo; j < hi; ++j) {
      trajectory_phases(state, spec, t_steps, reports, seed, j, opts, q, p,
                        [&](std::size_t, double phi) { phases[j] = phi; });
    }
  });
  return phases;
}

double predict_n_f(double sigma, double F) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  return (1.0 - F) / (sigma * sigma);
}

double predict_n_F_bound(double sigma, double F) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (F < 0.0 || F > 1.0) throw std::invalid_argument("F must lie in [0, 1]");
  return 4.0 * F * (1.0 - F) / (sigma * sigma);
}

double predict_n_F_normal(double sigma, double F) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (F < 0.0 || F > 1.0) throw std::invalid_argument("F must lie in [0, 1]");
  return 2.0 * F * (1.0 - F) * (1.0 - F) / (sigma * sigma);
}

double predict_n_F_general(std::span<const double> phases, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (phases.size() < 2) throw std::invalid_argument("need at least 2 phases");
  KahanComplexSum s1, s2;
  for (double phi : phases) {
    s1.add({std::cos(phi), std::sin(phi)});
    s2.add({std::cos(2.0 * phi), std::sin(2.0 * phi)});
  }
  const double n = static_cast<double>(phases.size());
  const std::complex<double> c1 = s1.value() / n;
  const std::complex<double> c2 = s2.value() / n;
  const double F = std::norm(c1);
  const double bracket = (c2 * std::conj(c1) * std::conj(c1)).real() + F - 2.0 * F * F;
  return 2.0 * bracket / (sigma * sigma);
}

}  // namespace fidsim
