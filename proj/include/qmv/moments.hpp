// SPDX-License-Identifier: Apache-2.0
//
// Mean values of |S(alpha, gamma)|^{2p} over rectangles of (alpha, gamma),
// where S(alpha, gamma) = sum_n a_n e(alpha n^2 + gamma n^4).
//
// Three evaluation routes:
//   * moment_exact: alpha over a full period. Orthogonality leaves only tuple
//     pairs with equal s2; the gamma integral is the closed-form kernel.
//   * moment_semianalytic: arbitrary rectangle, unit coefficients. Both
//     integrals are closed-form kernels over all pairs of spectrum keys.
//   * moment_quadrature: tensor midpoint rule on the integrand itself. Used as
//     the independent oracle for the other two.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qmv/common.hpp"
#include "qmv/exp_core.hpp"

namespace qmv {

struct MomentQuery {
  int p = 3;
  IntRange range;
  double alpha0 = 0.0, alpha1 = 1.0;
  double gamma0 = 0.0, gamma1 = 1.0;
  std::optional<CoefficientSequence> coeffs;  // all ones when absent
};

enum class MomentMethod { exact_orthogonality, semianalytic, quadrature };

struct MomentResult {
  double value = 0.0;
  MomentMethod method = MomentMethod::exact_orthogonality;
  double error_estimate = 0.0;
  double imag_residue = 0.0;  // |Im| of the complex accumulation (kernel routes)
};

/// Integral of e(gamma d) over [lambda0, lambda1].
cplx gamma_kernel(double lambda0, double lambda1, i128 d);

inline constexpr double kDefaultQuadratureSafety = 0.05;
inline constexpr std::uint64_t kDefaultGridBudget = 1'000'000'000;
inline constexpr std::uint64_t kDefaultPairBudget = 400'000'000;

MomentResult moment_exact(const MomentQuery& q, std::uint64_t budget = kDefaultSpectrumBudget);

MomentResult moment_semianalytic(const MomentQuery& q, std::uint64_t budget = kDefaultSpectrumBudget,
                                 std::uint64_t pair_budget = kDefaultPairBudget);

/// Midpoint rule. A direction whose interval length is a whole number of
/// periods is sampled above its bandwidth, which makes the rule exact there;
/// other directions use steps h_alpha <= safety / (2 pi nmax^2 2p) and
/// h_gamma <= safety / (2 pi nmax^4 2p), and the error estimate comes from
/// one halving of those steps.
MomentResult moment_quadrature(const MomentQuery& q, double safety = kDefaultQuadratureSafety,
                               std::uint64_t grid_budget = kDefaultGridBudget);

/// Grid that moment_quadrature would use: nodes per direction (coarse pass)
/// and the total number of integrand evaluations including the halving.
struct QuadratureGrid {
  std::uint64_t alpha_nodes = 0;
  std::uint64_t gamma_nodes = 0;
  bool alpha_periodic = false;
  bool gamma_periodic = false;
  double total_evaluations = 0.0;
};
QuadratureGrid plan_quadrature(const MomentQuery& q, double safety = kDefaultQuadratureSafety);

/// I(N): alpha over [0, 1], gamma over [-N^-3, N^-3], n in (N, 2N].
MomentResult integral_I(std::int64_t N, int p = 3, std::uint64_t budget = kDefaultSpectrumBudget);
/// Same for a real N: n ranges over the integers in (N, 2N].
MomentResult integral_I_real(double N, int p = 3, std::uint64_t budget = kDefaultSpectrumBudget);

struct RResult {
  MomentResult r;
  double i_2dn = 0.0;         // I(2 Delta N)
  double i_4dn = 0.0;         // I(4 Delta N)
  double lemma5_ratio = 0.0;  // R / (Delta (log N)^6 (I(2 Delta N) + I(4 Delta N)))
};

enum class RMethod { semianalytic, quadrature };

/// R(Delta, N): alpha over [Delta, 2 Delta], gamma over [-N^-3, N^-3].
/// Requires N >= 16 and N^{-1/2} <= Delta <= 1/4.
RResult integral_R(double Delta, std::int64_t N, int p = 3, RMethod method = RMethod::semianalytic,
                   std::uint64_t budget = kDefaultSpectrumBudget);

struct Lemma3Check {
  double value = 0.0;        // integral over [0, N^{-1/2}] x [-N^-3, N^-3]
  double log_power = 0.0;    // (log N)^6
  double ratio = 0.0;        // value / log_power
};
Lemma3Check lemma3_check(std::int64_t N, std::uint64_t budget = kDefaultSpectrumBudget);

/// Iterates beta <- beta / (1 + beta) n times.
double exponent_recurrence(double beta0, int n);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log-space residuals
};

/// Ordinary least squares of log(value) against log(scale).
ExponentFit fit_exponent(std::span<const std::pair<double, double>> samples);

}  // namespace qmv
