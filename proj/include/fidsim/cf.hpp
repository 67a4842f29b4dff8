#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fidsim/dynamics.hpp"
#include "fidsim/phasespace.hpp"
#include "fidsim/run_options.hpp"

namespace fidsim {

enum class CfPicture { Fidelity, Echo };
enum class CfVariant { Standard, Echo1Prime };

/// One member of the classical-fidelity estimator family: a picture
/// (echo or fidelity dynamics), a sampling-weight power M (weight rho^M),
/// a normalized flag (same-sample ratio, no I_M factor), and the echo-1'
/// variant. Names follow the pattern "echo-2", "fid-N-0", "echo-1prime".
struct CfAlgorithm {
  CfPicture picture = CfPicture::Echo;
  double M = 2.0;
  bool normalized = false;
  CfVariant variant = CfVariant::Standard;

  /// Throws ConfigError for inadmissible combinations (negative M, M = 0 off
  /// the torus, malformed echo-1').
  void validate(const SystemSpec& spec) const;

  std::string name() const;
  static CfAlgorithm parse(const std::string& text);

  bool operator==(const CfAlgorithm&) const = default;
};

/// F estimates with within-run standard errors (delta method for the
/// normalized ratio forms).
struct CfSeries {
  std::vector<double> times;
  std::vector<double> F;
  std::vector<double> se;
  std::uint64_t N = 0;
  CfAlgorithm algorithm;
  std::uint64_t seed = 0;
};

/// Any member of the family. Echo picture: x0 ~ rho^M, and each reported
/// time recomputes x^-t from x0 (forward strength epsilon, backward strength
/// 0), so a full curve costs O(t_max^2). Fidelity picture with M > 0:
/// each reported time draws a fresh y ~ rho^M (the weight rho(x_0^-t)^M is
/// time dependent), runs forward with strength 0 and backward with strength
/// epsilon; also O(t_max^2). Fidelity picture with M = 0 (torus only):
/// uniform x0, both backward legs advance incrementally, cost O(t_max).
/// All integrands are evaluated in log-density space, which keeps D = 100
/// products representable and makes the t = 0 exactness guarantees bitwise.
CfSeries run_cf(const GaussianWavepacket& state, const SystemSpec& spec,
                const CfAlgorithm& alg, double t_max, std::uint64_t N, std::uint64_t seed,
                const RunOptions& opts = {});

CfSeries run_echo_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                    std::uint64_t N, double M, std::uint64_t seed,
                    const RunOptions& opts = {});
CfSeries run_fid_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                   std::uint64_t N, double M, std::uint64_t seed,
                   const RunOptions& opts = {});
CfSeries run_echo_n_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                      std::uint64_t N, double M, std::uint64_t seed,
                      const RunOptions& opts = {});
CfSeries run_fid_n_m(const GaussianWavepacket& state, const SystemSpec& spec, double t_max,
                     std::uint64_t N, double M, std::uint64_t seed,
                     const RunOptions& opts = {});
CfSeries run_echo_1prime(const GaussianWavepacket& state, const SystemSpec& spec,
                         double t_max, std::uint64_t N, std::uint64_t seed,
                         const RunOptions& opts = {});

}  // namespace fidsim
