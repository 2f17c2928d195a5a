// SPDX-License-Identifier: Apache-2.0
//
// Weyl sums S_k(alpha) = sum_{n<=N} e(alpha n^k), the near-integer count
// B_{H,delta}(alpha), rational approximations alpha = a/q + theta with the
// explicit bounds on B they imply, symmetric differencing of alpha n^k, and
// the pair count used by the double large sieve.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "qmv/common.hpp"
#include "qmv/phase.hpp"

namespace qmv {

struct WeylSum {
  cplx value;
  /// Set when the decimal input alpha cannot be pinned down by its double
  /// closely enough for the phases: N^k |alpha| 2^-53 > 1e-6.
  bool precision_warning = false;
};

/// Phases are computed exactly on the binary value of alpha (a dyadic
/// rational), so the result is accurate for any k.
WeylSum weyl_sum(int k, std::int64_t N, double alpha);

/// alpha = a/q exactly; phases from a n^k mod q by modular exponentiation.
WeylSum weyl_sum_rational(int k, std::int64_t N, std::int64_t a, std::int64_t q);

/// #{1 <= h <= H : ||alpha h|| <= delta}, by direct loop.
std::int64_t near_integer_count(double alpha, std::int64_t H, double delta);

/// Same count, exact for rational alpha and delta, in O(log) big-integer
/// steps via floor sums. Usable for H far beyond a direct loop.
std::int64_t near_integer_count_exact(const mpq_class& alpha, std::int64_t H, const mpq_class& delta);

struct RationalApprox {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double theta = 0.0;  // alpha - a/q
};

/// Continued-fraction convergent of alpha with the largest q <= Q.
RationalApprox best_rational(double alpha, std::int64_t Q);

struct HeathBrownBounds {
  double bound1 = 0.0;                // 4 (1 + q delta)(1 + H/q)
  std::optional<double> bound2;       // 8 (1 + delta/(q|theta|))(1 + q|theta| H), theta != 0
};

HeathBrownBounds heathbrown_bounds(const RationalApprox& r, std::int64_t H, double delta);

/// Coefficients (index = power of n) of Delta_{h_1} ... Delta_{h_r}(alpha n^k)
/// where Delta_h f(x) = f(x + h) - f(x - h).
std::vector<mpq_class> symmetric_differences(int k, int r, std::span<const std::int64_t> h,
                                             const mpq_class& alpha);

struct Theorem4Report {
  int k = 0;
  std::int64_t N = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::int64_t H = 0;               // 16 (k!/4!) N^{k-4}
  double delta = 0.0;               // N^-4
  double K = 0.0;                   // 2^k
  double exponent_main = 0.0;       // 1 - 16/K
  double exponent_secondary = 0.0;  // 1 - 3/K
  std::int64_t B = 0;               // B_{H,delta}(alpha)
  double lhs = 0.0;                 // |S_k(alpha)|
  double rhs = 0.0;                 // N^{1-16/K} + N^{1-3/K+eps} (B/(H N^-4))^{8/(5K)}
  double ratio = 0.0;
  bool precision_warning = false;
  RationalApprox approx;            // best_rational(alpha, H)
  bool corollary_q_window = false;      // N^4 <= q <= N^{k-4}
  bool corollary_theta_window = false;  // N^{-(k-4)} <= |theta| q <= N^-4
  double probabilistic_B = 0.0;         // H^{1+eps} delta + H^eps
  double probabilistic_rhs = 0.0;       // N^{1+eps-3/K} (1 + N^{8-k})^{8/(5K)}
};

inline constexpr double kDefaultEpsilon = 0.01;

Theorem4Report theorem4_report(int k, std::int64_t N, double alpha, double epsilon = kDefaultEpsilon);

/// #{(h1, h2) : ||a_h1 - a_h2|| <= N^-4 and ||b_h1 - b_h2|| <= N^-2}.
std::uint64_t sieve_pair_count(std::span<const double> a_values, std::span<const double> b_values,
                               std::int64_t N);

/// Distance to the nearest integer.
double dist_to_integer(double x);

}  // namespace qmv
