#pragma once

#include <cmath>
#include <complex>

namespace fidsim {

/// Neumaier compensated accumulator. Summation order is part of the result
/// contract, so engines always add in trajectory order and merge per-block
/// partials in block order.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const KahanSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }

  void merge(const KahanComplexSum& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

}  // namespace fidsim
