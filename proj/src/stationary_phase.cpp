// SPDX-License-Identifier: Apache-2.0

#include "qmv/stationary_phase.hpp"

#include <algorithm>
#include <cmath>

namespace qmv {

bool validate_domain(double alpha, double gamma, std::int64_t N) {
  if (!std::isfinite(alpha) || !std::isfinite(gamma) || N < 1) return false;
  const double n = static_cast<double>(N);
  return alpha > 0.0 && alpha <= 0.5 && std::fabs(gamma) <= alpha / (96.0 * n * n);
}

SmoothPhase::SmoothPhase(double alpha, double gamma, std::int64_t N, double A)
    : alpha_(alpha), gamma_(gamma), N_(N), A_(A) {
  if (!validate_domain(alpha, gamma, N))
    throw ParameterError("phase violates 0 < alpha <= 1/2, |gamma| <= alpha/(96 N^2)");
  if (!(A > 1.0 && A <= 2.0)) throw ParameterError("range multiplier A must satisfy 1 < A <= 2");
}

double SmoothPhase::lambda2() const {
  // g'' is monotone in x^2; the minimum sits at an endpoint.
  return std::min(d2(left()), d2(right()));
}

double invert_derivative(const SmoothPhase& phase, double y) {
  double lo = phase.left(), hi = phase.right();
  const double ylo = phase.d1(lo), yhi = phase.d1(hi);
  const double slack = 1e-12 * std::fabs(y);
  if (!std::isfinite(y) || y < ylo - slack || y > yhi + slack)
    throw ParameterError("y lies outside the image of g'");
  const double tol = 1e-12 * std::fabs(y);
  if (std::fabs(ylo - y) <= tol) return lo;
  if (std::fabs(yhi - y) <= tol) return hi;

  double z = std::clamp(y / (2.0 * phase.alpha()), lo, hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double f = phase.d1(z) - y;
    if (std::fabs(f) <= tol) return z;
    if (f < 0.0)
      lo = z;
    else
      hi = z;
    double next = z - f / phase.d2(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    z = next;
  }
  if (std::fabs(phase.d1(z) - y) <= tol) return z;
  throw InternalError("derivative inversion did not converge");
}

double transform_value(const SmoothPhase& phase, double y) {
  const double z = invert_derivative(phase, y);
  return phase.value(z) - y * z;
}

double expansion_value(double alpha, double gamma, double y) {
  if (alpha == 0.0) throw ParameterError("expansion needs alpha != 0");
  const double y2 = y * y;
  const double a4 = alpha * alpha * alpha * alpha;
  return -y2 / (4.0 * alpha) + gamma * y2 * y2 / (16.0 * a4) -
         gamma * gamma * y2 * y2 * y2 / (16.0 * a4 * alpha * alpha * alpha);
}

double expansion_deviation(const SmoothPhase& phase, std::span<const double> ys) {
  double worst = 0.0;
  for (double y : ys)
    worst = std::max(worst, std::fabs(transform_value(phase, y) -
                                      expansion_value(phase.alpha(), phase.gamma(), y)));
  return worst;
}

double remainder_slope(const SmoothPhase& phase, double y, double h) {
  auto rem = [&](double t) {
    return transform_value(phase, t) - expansion_value(phase.alpha(), phase.gamma(), t);
  };
  return (rem(y + h) - rem(y - h)) / (2.0 * h);
}

BTransformResult b_transform_residual(const SmoothPhase& phase, BTransformOptions options) {
  BTransformResult out;
  out.lambda2 = phase.lambda2();

  CompensatedSum lhs;
  const auto last_n = static_cast<std::int64_t>(std::floor(phase.right()));
  for (std::int64_t n = phase.N() + 1; n <= last_n; ++n) {
    const i128 n2 = static_cast<i128>(n) * n;
    lhs += unit(frac_product(phase.alpha(), n2) + frac_product(phase.gamma(), n2 * n2));
  }
  out.lhs = lhs.value();

  std::int64_t first = static_cast<std::int64_t>(std::ceil(phase.d1(phase.left())));
  std::int64_t last = static_cast<std::int64_t>(std::floor(phase.d1(phase.right())));
  if (options.drop_endpoints) {
    ++first;
    --last;
  }
  out.nu_first = first;
  out.nu_last = last;

  CompensatedSum rhs;
  for (std::int64_t nu = first; nu <= last; ++nu) {
    const double y = static_cast<double>(nu);
    const double z = invert_derivative(phase, y);
    const double g2 = phase.d2(z);
    const double weight = options.normalization == Normalization::sqrt_second_derivative ? 1.0 / std::sqrt(g2)
                                                                                           : 1.0 / g2;
    rhs += weight * unit(frac(phase.value(z) - y * z) + 0.125);
  }
  out.rhs = rhs.value();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

double b_transform_envelope(std::int64_t N, double lambda2, double constant) {
  return constant * (std::log(2.0 + static_cast<double>(N) * lambda2) + 1.0 / std::sqrt(lambda2));
}

}  // namespace qmv
