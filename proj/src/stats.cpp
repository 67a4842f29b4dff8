#include "fidsim/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/dr.hpp"
#include "fidsim/kahan.hpp"

namespace fidsim {

EnsembleStats ensemble_error(const SeriesRunner& runner, std::size_t S, std::uint64_t seed) {
  if (S < 2) throw std::invalid_argument("ensemble needs at least 2 members");
  std::vector<SeriesSample> members(S);
  for (std::size_t m = 0; m < S; ++m) {
    members[m] = runner(seed, static_cast<std::uint32_t>(m));
    if (members[m].times.size() != members[0].times.size() ||
        members[m].F.size() != members[m].times.size()) {
      throw std::invalid_argument("ensemble members disagree on the report grid");
    }
    if (!members[m].f.empty() && members[m].f.size() != members[m].times.size()) {
      throw std::invalid_argument("amplitude series length does not match the report grid");
    }
  }
  const std::size_t nrep = members[0].times.size();
  const bool has_f = !members[0].f.empty();
  const double s = static_cast<double>(S);

  EnsembleStats out;
  out.times = members[0].times;
  out.mean_F.resize(nrep);
  out.sigma_F.resize(nrep);
  out.sigma_F_se.resize(nrep);
  if (has_f) {
    out.mean_f.resize(nrep);
    out.sigma_f.resize(nrep);
  }
  out.S = S;

  for (std::size_t r = 0; r < nrep; ++r) {
    KahanSum sum;
    for (std::size_t m = 0; m < S; ++m) sum.add(members[m].F[r]);
    const double mean = sum.value() / s;
    KahanSum m2, m4;
    for (std::size_t m = 0; m < S; ++m) {
      const double d = members[m].F[r] - mean;
      m2.add(d * d);
      m4.add(d * d * d * d);
    }
    const double var = m2.value() / (s - 1.0);
    const double sigma = std::sqrt(std::max(0.0, var));
    out.mean_F[r] = mean;
    out.sigma_F[r] = sigma;
    // Var(s^2) = (m4 - var^2 (S-3)/(S-1))/S and SE(s) = SE(s^2)/(2 s); fall
    // back to the normal-theory value when the estimate degenerates.
    const double cm4 = m4.value() / s;
    const double var_of_var = (cm4 - var * var * (s - 3.0) / (s - 1.0)) / s;
    if (sigma > 0.0 && var_of_var > 0.0) {
      out.sigma_F_se[r] = std::sqrt(var_of_var) / (2.0 * sigma);
    } else {
      out.sigma_F_se[r] = sigma / std::sqrt(2.0 * (s - 1.0));
    }
    if (has_f) {
      KahanComplexSum fsum;
      for (std::size_t m = 0; m < S; ++m) fsum.add(members[m].f[r]);
      const std::complex<double> fmean = fsum.value() / s;
      KahanSum scatter;
      for (std::size_t m = 0; m < S; ++m) scatter.add(std::norm(members[m].f[r] - fmean));
      out.mean_f[r] = fmean;
      out.sigma_f[r] = std::sqrt(std::max(0.0, scatter.value() / (s - 1.0)));
    }
  }
  return out;
}

BetaFit fit_beta(std::span<const double> dims, std::span<const double> sigmas) {
  const std::size_t n = dims.size();
  if (sigmas.size() != n) throw std::invalid_argument("dims and sigmas differ in length");
  if (n < 3) throw std::invalid_argument("beta fit needs at least 3 points");
  std::vector<double> y(n);
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sigmas[i] > 0.0)) throw std::invalid_argument("sigmas must be positive");
    y[i] = 2.0 * std::log(sigmas[i]);
    xbar += dims[i];
    ybar += y[i];
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (dims[i] - xbar) * (dims[i] - xbar);
    sxy += (dims[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("dims must not all coincide");
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * dims[i]);
    ss_res += r * r;
  }
  const double resid_var = ss_res / static_cast<double>(n - 2);
  const double slope_se = std::sqrt(resid_var / sxx);

  BetaFit fit;
  fit.slope = slope;
  fit.slope_se = slope_se;
  fit.beta = std::exp(slope);
  fit.alpha = std::exp(intercept);
  fit.beta_se = fit.beta * slope_se;
  fit.significant = slope > 2.0 * slope_se;
  return fit;
}

double required_n(double n_used, double sigma_measured, double sigma_target) {
  if (!(n_used > 0.0)) throw std::invalid_argument("n_used must be positive");
  if (!(sigma_measured > 0.0)) throw std::invalid_argument("sigma_measured must be positive");
  if (!(sigma_target > 0.0)) throw std::invalid_argument("sigma_target must be positive");
  const double ratio = sigma_measured / sigma_target;
  return n_used * ratio * ratio;
}

MatchedTime find_time_for_fidelity(const GaussianWavepacket& state, const SystemSpec& spec,
                                   double target_F, double t_max, std::uint64_t N,
                                   std::uint64_t seed, const RunOptions& opts) {
  if (!(target_F > 0.0 && target_F < 1.0)) {
    throw std::invalid_argument("target_F must lie strictly between 0 and 1");
  }
  const DrSeries pilot = run_dr(state, spec, t_max, N, seed, opts);
  std::size_t best = 0;
  double best_gap = std::abs(pilot.F[0] - target_F);
  for (std::size_t r = 1; r < pilot.F.size(); ++r) {
    const double gap = std::abs(pilot.F[r] - target_F);
    if (gap < best_gap) {
      best = r;
      best_gap = gap;
    }
    // The pilot curve decays on the matching window; once it has fallen
    // below target there is no closer later point before a revival, and
    // stopping keeps revivals from stealing the match.
    if (pilot.F[r] < target_F) break;
  }
  return {pilot.times[best], pilot.F[best]};
}

}  // namespace fidsim
