// SPDX-License-Identifier: Apache-2.0
//
// Phase arithmetic: exact reduction of x*m mod 1 for a double x and a large
// integer m, the normalized exponential e(t) = exp(2*pi*i*t), and a
// Neumaier-compensated complex accumulator.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "qmv/common.hpp"

namespace qmv {

using cplx = std::complex<double>;

/// Fractional part of x*m in [0, 1).
///
/// m is split into a double-double (exact for |m| < 2^106) and the leading
/// product is formed exactly with an FMA, so the result stays accurate even
/// when |x*m| is far beyond 2^52.
double frac_product(double x, i128 m);

/// Fractional part of a double in [0, 1).
inline double frac(double t) {
  double f = t - std::floor(t);
  return f >= 1.0 ? 0.0 : f;
}

/// e(t) for t already reduced mod 1. Reduces to [-1/2, 1/2) before the
/// trigonometric call.
inline cplx unit(double t) {
  double r = t - std::nearbyint(t);
  const double a = 2.0 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

class CompensatedSum {
 public:
  void add(cplx z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  CompensatedSum& operator+=(cplx z) {
    add(z);
    return *this;
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// Real Neumaier accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

}  // namespace qmv
