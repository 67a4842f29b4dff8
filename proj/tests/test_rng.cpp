#include <cmath>
#include <cstdint>
#include <set>

#include "doctest.h"
#include "fidsim/rng.hpp"

using fidsim::CounterRng;
using fidsim::make_stream;

// Known-answer values from an independent implementation of the Philox4x32
// round function (10 rounds, multipliers 0xD2511F53/0xCD9E8D57, Weyl keys
// 0x9E3779B9/0xBB67AE85), with the counter laid out as (block lo, block hi,
// stream lo, stream hi) and outputs served as word1:word0 then word3:word2.
TEST_CASE("counter rng known answers, zero seed and stream") {
  CounterRng rng(0, 0);
  CHECK(rng.next_u64() == 0xe169c58d6627e8d5ULL);
  CHECK(rng.next_u64() == 0x9b00dbd8bc57ac4cULL);
  CHECK(rng.next_u64() == 0x5cb200dbf8e4cca4ULL);
  CHECK(rng.next_u64() == 0x097eff67b1a574ebULL);
}

TEST_CASE("counter rng known answers, nonzero seed and packed stream") {
  const std::uint64_t stream = make_stream(7, 3, 2);
  CHECK(stream == 36028848558571527ULL);
  CounterRng rng(0x123456789ABCDEF0ULL, stream);
  CHECK(rng.next_u64() == 0xfd99de25cdb1a5b8ULL);
  CHECK(rng.next_u64() == 0xcfe920001e8bb8bdULL);
  CHECK(rng.next_u64() == 0x0cb51888098823bcULL);
  CHECK(rng.next_u64() == 0xd4003ceb25321c0eULL);
}

TEST_CASE("uniform and normal transforms match the independent mirror") {
  CounterRng rng(42, 9);
  CHECK(rng.uniform01() == doctest::Approx(0.64941046463481866).epsilon(1e-14));
  CounterRng rng2(42, 9);
  CHECK(rng2.normal() == doctest::Approx(1.2342497006722988).epsilon(1e-12));
  CHECK(rng2.normal() == doctest::Approx(-0.75690553297569951).epsilon(1e-12));
  CHECK(rng2.normal() == doctest::Approx(-0.095708655286228031).epsilon(1e-12));
  CHECK(rng2.normal() == doctest::Approx(1.7059117711505272).epsilon(1e-12));
}

TEST_CASE("stream packing masks and shifts fields") {
  CHECK(make_stream(0, 0, 0) == 0ULL);
  CHECK(make_stream(1, 0, 0) == 1ULL);
  CHECK(make_stream(0, 1, 0) == (1ULL << 34));
  CHECK(make_stream(0, 0, 1) == (1ULL << 54));
  // Fields do not bleed into each other.
  CHECK(make_stream(0x3FFFFFFFFULL, 0, 0) == 0x3FFFFFFFFULL);
  CHECK(make_stream(0x400000000ULL, 0, 0) == 0ULL);
  CHECK(make_stream(0, 0xFFFFFULL, 1) ==
        ((0xFFFFFULL << 34) | (1ULL << 54)));
}

TEST_CASE("draws are deterministic per (seed, stream) and distinct across streams") {
  CounterRng a(123, 5), b(123, 5), c(123, 6), d(124, 5);
  bool same_ab = true, diff_ac = false, diff_ad = false;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t va = a.next_u64();
    same_ab = same_ab && (va == b.next_u64());
    diff_ac = diff_ac || (va != c.next_u64());
    diff_ad = diff_ad || (va != d.next_u64());
  }
  CHECK(same_ab);
  CHECK(diff_ac);
  CHECK(diff_ad);
}

TEST_CASE("uniform01 lies in [0,1) with correct first moments") {
  CounterRng rng(7, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal deviates have standard moments") {
  CounterRng rng(11, 3);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
    sum4 += x * x * x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("block counter advances without repeating outputs") {
  CounterRng rng(3, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 4096; ++i) seen.insert(rng.next_u64());
  CHECK(seen.size() == 4096);
}
