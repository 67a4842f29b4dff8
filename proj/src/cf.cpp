#include "fidsim/cf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "fidsim/detail/engine.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/kahan.hpp"
#include "fidsim/parallel.hpp"

namespace fidsim {

namespace {

/// Per-block, per-report moment sums for F = <A> or F = <A>/<B> with a
/// delta-method error bar. B moments are allocated only for ratio forms.
struct MomentAccum {
  std::vector<KahanSum> a, a2, b, b2, ab;

  void resize(std::size_t n, bool ratio) {
    a.resize(n);
    a2.resize(n);
    if (ratio) {
      b.resize(n);
      b2.resize(n);
      ab.resize(n);
    }
  }
};

/// Echo-picture trajectory: x0 ~ rho^M once, then for every reported time the
/// echo endpoint is rebuilt from x0 (forward strength epsilon, backward
/// strength 0), exactly as echo_point composes the legs. emit(r, w_moving,
/// w_sample) receives log-densities at the echo endpoint and at x0.
template <typename EmitFn>
void echo_trajectory(const GaussianWavepacket& state, const SystemSpec& spec, double M,
                     const std::vector<std::size_t>& reports, std::uint64_t seed,
                     std::uint64_t traj, const RunOptions& opts, std::vector<double>& q0,
                     std::vector<double>& p0, std::vector<double>& qe,
                     std::vector<double>& pe, EmitFn&& emit) {
  CounterRng rng(seed, make_stream(traj, 0, opts.ensemble));
  if (M == 0.0) {
    draw_uniform_cell(state, rng, q0, p0);
  } else {
    draw_power_density(state, M, rng, q0, p0);
  }
  const double w0 = wigner_log_density(state, q0, p0);
  for (std::size_t r = 0; r < reports.size(); ++r) {
    std::copy(q0.begin(), q0.end(), qe.begin());
    std::copy(p0.begin(), p0.end(), pe.begin());
    std::span<double> q(qe), p(pe);
    const std::size_t steps = reports[r];
    if (spec.kind == SystemKind::Rotor) {
      for (std::size_t t = 0; t < steps; ++t) {
        rotor_step(q, p, spec.kick, spec.epsilon, Direction::Forward);
      }
      for (std::size_t t = 0; t < steps; ++t) {
        rotor_step(q, p, spec.kick, 0.0, Direction::Backward);
      }
    } else if (steps > 0) {
      // Zero steps must leave the point bitwise untouched; the rotation
      // composes c + (x - c) even for zero time, which can slip one ulp.
      const double time = static_cast<double>(steps) * opts.dt;
      sho_step(q, p, spec, spec.epsilon, time);
      sho_step(q, p, spec, 0.0, -time);
    }
    emit(r, wigner_log_density(state, qe, pe), w0);
  }
}

/// Fidelity-picture trajectory for M > 0. The weight rho(x_0^-t)^M depends on
/// the reported time, so each report draws a fresh y ~ rho^M on its own
/// counter stream, pushes it forward with strength 0 (so x_0^-t = y exactly)
/// and back with strength epsilon.
template <typename EmitFn>
void fid_resampled_trajectory(const GaussianWavepacket& state, const SystemSpec& spec,
                              double M, const std::vector<std::size_t>& reports,
                              std::uint64_t seed, std::uint64_t traj, const RunOptions& opts,
                              std::vector<double>& qy, std::vector<double>& py,
                              std::vector<double>& qz, std::vector<double>& pz,
                              EmitFn&& emit) {
  for (std::size_t r = 0; r < reports.size(); ++r) {
    CounterRng rng(seed, make_stream(traj, 1 + r, opts.ensemble));
    draw_power_density(state, M, rng, qy, py);
    const double wy = wigner_log_density(state, qy, py);
    std::copy(qy.begin(), qy.end(), qz.begin());
    std::copy(py.begin(), py.end(), pz.begin());
    std::span<double> q(qz), p(pz);
    const std::size_t steps = reports[r];
    if (spec.kind == SystemKind::Rotor) {
      for (std::size_t t = 0; t < steps; ++t) {
        rotor_step(q, p, spec.kick, 0.0, Direction::Forward);
      }
      for (std::size_t t = 0; t < steps; ++t) {
        rotor_step(q, p, spec.kick, spec.epsilon, Direction::Backward);
      }
    } else if (steps > 0) {
      // Same one-ulp guard as the echo picture: zero steps stay bitwise.
      const double time = static_cast<double>(steps) * opts.dt;
      sho_step(q, p, spec, 0.0, time);
      sho_step(q, p, spec, spec.epsilon, -time);
    }
    emit(r, wigner_log_density(state, qz, pz), wy);
  }
}

/// Fidelity-picture trajectory for M = 0 (torus only). The uniform cell
/// measure is invariant under both maps, so x0 is drawn uniformly once and
/// the two backward endpoints x_0^-t, x_eps^-t advance incrementally: the
/// whole series costs O(t_max) steps instead of O(t_max^2).
template <typename EmitFn>
void fid_uniform_trajectory(const GaussianWavepacket& state, const SystemSpec& spec,
                            const std::vector<std::size_t>& reports, std::uint64_t seed,
                            std::uint64_t traj, const RunOptions& opts,
                            std::vector<double>& qb0, std::vector<double>& pb0,
                            std::vector<double>& qbe, std::vector<double>& pbe,
                            EmitFn&& emit) {
  CounterRng rng(seed, make_stream(traj, 0, opts.ensemble));
  draw_uniform_cell(state, rng, qb0, pb0);
  std::copy(qb0.begin(), qb0.end(), qbe.begin());
  std::copy(pb0.begin(), pb0.end(), pbe.begin());
  std::span<double> q0(qb0), p0(pb0), qe(qbe), pe(pbe);
  std::size_t done = 0;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (; done < reports[r]; ++done) {
      rotor_step(q0, p0, spec.kick, 0.0, Direction::Backward);
      rotor_step(qe, pe, spec.kick, spec.epsilon, Direction::Backward);
    }
    emit(r, wigner_log_density(state, qbe, pbe), wigner_log_density(state, qb0, pb0));
  }
}

}  // namespace

void CfAlgorithm::validate(const SystemSpec& spec) const {
  if (variant == CfVariant::Echo1Prime) {
    if (picture != CfPicture::Echo || normalized || M != 1.0) {
      throw ConfigError("echo-1prime is the echo picture with M = 1 and no normalization");
    }
  }
  if (!(M >= 0.0)) {
    throw ConfigError("estimator power M must be non-negative");
  }
  if (M == 0.0 && spec.kind != SystemKind::Rotor) {
    throw ConfigError("M = 0 samples a torus cell uniformly and requires the rotor system");
  }
}

std::string CfAlgorithm::name() const {
  if (variant == CfVariant::Echo1Prime) return "echo-1prime";
  std::ostringstream out;
  out << (picture == CfPicture::Echo ? "echo" : "fid");
  if (normalized) out << "-N";
  out << "-" << M;
  return out.str();
}

CfAlgorithm CfAlgorithm::parse(const std::string& text) {
  CfAlgorithm alg;
  if (text == "echo-1prime" || text == "echo-1'") {
    alg.picture = CfPicture::Echo;
    alg.M = 1.0;
    alg.normalized = false;
    alg.variant = CfVariant::Echo1Prime;
    return alg;
  }
  std::string rest;
  if (text.rfind("echo-", 0) == 0) {
    alg.picture = CfPicture::Echo;
    rest = text.substr(5);
  } else if (text.rfind("fid-", 0) == 0) {
    alg.picture = CfPicture::Fidelity;
    rest = text.substr(4);
  } else {
    throw ConfigError("unknown estimator name: " + text);
  }
  if (rest.rfind("N-", 0) == 0) {
    alg.normalized = true;
    rest = rest.substr(2);
  }
  if (rest.empty() || !(std::isdigit(static_cast<unsigned char>(rest[0])) || rest[0] == '.')) {
    throw ConfigError("unknown estimator name: " + text);
  }
  std::size_t pos = 0;
  double m = 0.0;
  try {
    m = std::stod(rest, &pos);
  } catch (const std::exception&) {
    throw ConfigError("unknown estimator name: " + text);
  }
  if (pos != rest.size() || !(m >= 0.0)) {
    throw ConfigError("unknown estimator name: " + text);
  }
  alg.M = m;
  return alg;
}

CfSeries run_cf(const GaussianWavepacket& state, const SystemSpec& spec,
                const CfAlgorithm& alg, double t_max, std::uint64_t N, std::uint64_t seed,
                const RunOptions& opts) {
  alg.validate(spec);
  detail::check_run(state, spec, t_max, N);
  const std::size_t t_steps = detail::total_steps(spec, t_max, opts.dt);
  const auto reports = report_steps(t_steps, opts.report_stride);
  const std::size_t nrep = reports.size();
  const std::size_t nblocks = block_count(N);

  const double M = alg.M;
  const double one_minus_m = 1.0 - M;
  const bool ratio = alg.normalized;
  const bool prime = alg.variant == CfVariant::Echo1Prime;
  // log(I_M); ratio forms cancel it (keeping t = 0 bitwise) and folding it
  // into the exponent keeps M = 0 finite at high D, where I_0 = n1^D
  // overflows as a plain value.
  double log_norm = 0.0;
  if (!ratio && !prime) {
    const double d = static_cast<double>(spec.dim);
    log_norm = M == 0.0 ? d * std::log(static_cast<double>(spec.n1))
                        : d * ((M - 1.0) * std::log(2.0) - std::log(M));
  }

  std::vector<MomentAccum> acc(nblocks);
  for_each_block(N, opts.workers, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
    acc[blk].resize(nrep, ratio);
    MomentAccum& sums = acc[blk];
    auto emit = [&](std::size_t r, double w_moving, double w_sample) {
      if (prime) {
        const double A = std::exp(w_moving) - std::exp(w_sample);
        sums.a[r].add(A);
        sums.a2[r].add(A * A);
        return;
      }
      const double A = std::exp(w_moving + one_minus_m * w_sample + log_norm);
      sums.a[r].add(A);
      sums.a2[r].add(A * A);
      if (ratio) {
        const double B = std::exp(w_sample + one_minus_m * w_sample + log_norm);
        sums.b[r].add(B);
        sums.b2[r].add(B * B);
        sums.ab[r].add(A * B);
      }
    };
    std::vector<double> qa(spec.dim), pa(spec.dim), qb(spec.dim), pb(spec.dim);
    for (std::size_t j = lo; j < hi; ++j) {
      if (alg.picture == CfPicture::Echo) {
        echo_trajectory(state, spec, M, reports, seed, j, opts, qa, pa, qb, pb, emit);
      } else if (M > 0.0) {
        fid_resampled_trajectory(state, spec, M, reports, seed, j, opts, qa, pa, qb, pb,
                                 emit);
      } else {
        fid_uniform_trajectory(state, spec, reports, seed, j, opts, qa, pa, qb, pb, emit);
      }
    }
  });

  CfSeries out;
  out.times = detail::report_times(spec, reports, opts.dt);
  out.F.resize(nrep);
  out.se.resize(nrep);
  out.N = N;
  out.algorithm = alg;
  out.seed = seed;
  const double n = static_cast<double>(N);
  const double bessel = N > 1 ? n / (n - 1.0) : 0.0;
  for (std::size_t r = 0; r < nrep; ++r) {
    KahanSum sa, sa2, sb, sb2, sab;
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
      sa.merge(acc[blk].a[r]);
      sa2.merge(acc[blk].a2[r]);
      if (ratio) {
        sb.merge(acc[blk].b[r]);
        sb2.merge(acc[blk].b2[r]);
        sab.merge(acc[blk].ab[r]);
      }
    }
    const double mean_a = sa.value() / n;
    if (!ratio) {
      out.F[r] = prime ? 1.0 + mean_a : mean_a;
      const double var_a = std::max(0.0, sa2.value() / n - mean_a * mean_a) * bessel;
      out.se[r] = std::sqrt(var_a / n);
    } else {
      const double mean_b = sb.value() / n;
      const double F = mean_a / mean_b;
      out.F[r] = F;
      // Delta method: Var(A/B) ~ (var_a - 2 F cov + F^2 var_b) / (N mean_b^2).
      const double var_a = (sa2.value() / n - mean_a * mean_a) * bessel;
      const double var_b = (sb2.value() / n - mean_b * mean_b) * bessel;
      const double cov = (sab.value() / n - mean_a * mean_b) * bessel;
      const double var_ratio =
          std::max(0.0, (var_a - 2.0 * F * cov + F * F * var_b) / (mean_b * mean_b));
      out.se[r] = std::sqrt(var_ratio / n);
    }
  }
  return out;
}

CfSeries run_echo_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                    std::uint64_t N, double M, std::uint64_t seed, const RunOptions& opts) {
  CfAlgorithm alg{CfPicture::Echo, M, false, CfVariant::Standard};
  return run_cf(state, spec, alg, t_max, N, seed, opts);
}

CfSeries run_fid_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                   std::uint64_t N, double M, std::uint64_t seed, const RunOptions& opts) {
  CfAlgorithm alg{CfPicture::Fidelity, M, false, CfVariant::Standard};
  return run_cf(state, spec, alg, t_max, N, seed, opts);
}

CfSeries run_echo_n_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                      std::uint64_t N, double M, std::uint64_t seed, const RunOptions& opts) {
  CfAlgorithm alg{CfPicture::Echo, M, true, CfVariant::Standard};
  return run_cf(state, spec, alg, t_max, N, seed, opts);
}

CfSeries run_fid_n_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                     std::uint64_t N, double M, std::uint64_t seed, const RunOptions& opts) {
  CfAlgorithm alg{CfPicture::Fidelity, M, true, CfVariant::Standard};
  return run_cf(state, spec, alg, t_max, N, seed, opts);
}

CfSeries run_echo_1prime(const GaussianWavepacket& state, const SystemSpec& spec,
                         double t_max, std::uint64_t N, std::uint64_t seed,
                         const RunOptions& opts) {
  CfAlgorithm alg{CfPicture::Echo, 1.0, false, CfVariant::Echo1Prime};
  return run_cf(state, spec, alg, t_max, N, seed, opts);
}

}  // namespace fidsim
