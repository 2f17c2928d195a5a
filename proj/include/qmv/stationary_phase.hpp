// SPDX-License-Identifier: Apache-2.0
//
// Van der Corput B-transform for g(x) = alpha x^2 + gamma x^4 on [N, A N].

#pragma once

#include <cstdint>
#include <span>

#include "qmv/common.hpp"
#include "qmv/phase.hpp"

namespace qmv {

/// True iff 0 < alpha <= 1/2 and |gamma| <= alpha / (96 N^2).
bool validate_domain(double alpha, double gamma, std::int64_t N);

class SmoothPhase {
 public:
  /// Throws ParameterError unless validate_domain holds and 1 < A <= 2.
  SmoothPhase(double alpha, double gamma, std::int64_t N, double A = 2.0);

  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  std::int64_t N() const { return N_; }
  double A() const { return A_; }
  double left() const { return static_cast<double>(N_); }
  double right() const { return A_ * static_cast<double>(N_); }

  double value(double x) const { return alpha_ * x * x + gamma_ * x * x * x * x; }
  double d1(double x) const { return 2.0 * alpha_ * x + 4.0 * gamma_ * x * x * x; }
  double d2(double x) const { return 2.0 * alpha_ + 12.0 * gamma_ * x * x; }
  /// Minimum of g'' on [N, A N].
  double lambda2() const;

 private:
  double alpha_, gamma_;
  std::int64_t N_;
  double A_;
};

/// z(y) = (g')^{-1}(y) for y in [g'(N), g'(A N)], by Newton's method with a
/// bisection fallback on the bracket. |g'(z) - y| <= 1e-12 |y| on return.
double invert_derivative(const SmoothPhase& phase, double y);

/// g*(y) = g(z(y)) - y z(y).
double transform_value(const SmoothPhase& phase, double y);

/// -y^2/(4 alpha) + gamma y^4/(16 alpha^4) - gamma^2 y^6/(16 alpha^7).
double expansion_value(double alpha, double gamma, double y);

/// max over ys of |transform_value - expansion_value|.
double expansion_deviation(const SmoothPhase& phase, std::span<const double> ys);

/// Central finite difference of the remainder g* - expansion at y.
double remainder_slope(const SmoothPhase& phase, double y, double h);

enum class Normalization {
  sqrt_second_derivative,  // 1 / sqrt(g''(z(nu)))
  second_derivative,       // 1 / g''(z(nu)), the variant printed without the root
};

struct BTransformOptions {
  Normalization normalization = Normalization::sqrt_second_derivative;
  bool drop_endpoints = false;  // omit the first and last nu
};

struct BTransformResult {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  double lambda2 = 0.0;
  std::int64_t nu_first = 0;
  std::int64_t nu_last = -1;
};

/// lhs = sum_{N < n <= A N} e(g(n));
/// rhs = e(1/8) sum_{ceil g'(N) <= nu <= floor g'(A N)} e(g*(nu)) / sqrt(g''(z(nu))).
BTransformResult b_transform_residual(const SmoothPhase& phase, BTransformOptions options = {});

/// 10 (log(2 + N lambda2) + lambda2^{-1/2}), the calibrated residual envelope.
double b_transform_envelope(std::int64_t N, double lambda2, double constant = 10.0);

}  // namespace qmv
