#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fidsim {

/// Iterative radix-2 transform with precomputed twiddle factors.
/// Forward:  X[j] = sum_m a[m] exp(-2*pi*i*j*m/n)
/// Inverse:  a[m] = (1/n) sum_j X[j] exp(+2*pi*i*j*m/n)
/// n must be a power of two.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::complex<double>* a) const;
  void inverse(std::complex<double>* a) const;

 private:
  void transform(std::complex<double>* a, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*k/n), k < n/2
};

}  // namespace fidsim
