#pragma once

#include <cmath>
#include <cstdint>

namespace fidsim {

/// Counter-based random generator (Philox4x32, 10 rounds).
///
/// Every draw is a pure function of (seed, stream, draw index), so trajectory
/// j can be generated on any worker, in any order, with identical results.
/// Stream ids partition the draw space: distinct (seed, stream) pairs give
/// statistically independent sequences.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (avail_ == 0) refill();
    return buf_[--avail_];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; generates draws in pairs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 1 - u lies in (0, 1], keeping the logarithm finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ULL * c0;
      const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
      const std::uint32_t t0 = c1;
      const std::uint32_t t3 = c3;
      c0 = static_cast<std::uint32_t>(p1 >> 32) ^ t0 ^ k0;
      c1 = static_cast<std::uint32_t>(p1);
      c2 = static_cast<std::uint32_t>(p0 >> 32) ^ t3 ^ k1;
      c3 = static_cast<std::uint32_t>(p0);
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[1] = (static_cast<std::uint64_t>(c1) << 32) | c0;
    buf_[0] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    avail_ = 2;
    ++block_;
  }

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int avail_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stream-id layout shared by every Monte Carlo engine:
/// bits 0-33 trajectory index, bits 34-53 resample (time) index,
/// bits 54-62 ensemble member index.
inline std::uint64_t make_stream(std::uint64_t trajectory, std::uint64_t resample,
                                 std::uint64_t ensemble) {
  return (trajectory & 0x3FFFFFFFFULL) | ((resample & 0xFFFFFULL) << 34) |
         ((ensemble & 0x1FFULL) << 54);
}

}  // namespace fidsim
