#include "fidsim/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fidsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft size must be a power of two");
  }
  bitrev_.resize(n);
  std::size_t logn = 0;
  while ((std::size_t{1} << logn) < n) ++logn;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < logn; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (logn - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
  if (n == 1) twiddle_.assign(1, {1.0, 0.0});
}

void Fft::transform(std::complex<double>* a, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (j > i) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
  }
}

void Fft::forward(std::complex<double>* a) const { transform(a, false); }

void Fft::inverse(std::complex<double>* a) const { transform(a, true); }

}  // namespace fidsim
