// SPDX-License-Identifier: Apache-2.0
//
// Exact solution counts for the system
//   |s2(n) - s2(m)| <= t2,  |s4(n) - s4(m)| <= t4
// over ordered pairs of p-tuples (n, m) drawn from an integer range.

#pragma once

#include <cstdint>
#include <string_view>

#include "qmv/common.hpp"
#include "qmv/exp_core.hpp"

namespace qmv {

/// Exact rational num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational integer(std::int64_t v) { return {v, 1}; }
  /// Parses "num/den" or a plain integer.
  static Rational parse(std::string_view text);
  bool negative() const { return num < 0; }
  /// floor(num/den).
  std::int64_t floor() const;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct BoxQuery {
  int p = 1;
  IntRange range;
  Rational t2;
  Rational t4;
};

enum class CountMethod { bruteforce, spectral };

struct CountResult {
  std::uint64_t count = 0;
  CountMethod method = CountMethod::spectral;
  double elapsed_seconds = 0.0;
};

inline constexpr std::uint64_t kDefaultBruteforceBudget = 100'000'000;

/// 2p-fold enumeration with thresholds compared by cross-multiplication.
CountResult count_bruteforce(const BoxQuery& q, std::uint64_t budget = kDefaultBruteforceBudget);

/// Sliding s2 window over the sorted spectrum with a Fenwick tree over the
/// ranks of s4 inside the window. Agrees exactly with count_bruteforce.
CountResult count_spectral(const BoxQuery& q, std::uint64_t budget = kDefaultSpectrumBudget);
CountResult count_spectral(const PhaseSpectrum& spectrum, Rational t2, Rational t4);

/// (1 - |t|)^+, the Fourier transform of the Fejer kernel.
double fejer_hat(double t);
/// (sin(pi y) / (pi y))^2 with value 1 at the origin.
double fejer_kernel(double y);

/// sum over ordered tuple pairs of fejer_hat(delta*ds2) * fejer_hat(lambda*ds4).
/// Only p and range of `q` are used.
double fejer_weighted_count(const BoxQuery& q, double delta, double lambda,
                            std::uint64_t budget = kDefaultSpectrumBudget);

struct ProductGap {
  double max_ratio = 0.0;        // max |n1 n2 - m1 m2| / N over solutions
  std::uint64_t solutions = 0;   // ordered solution pairs scanned
};

/// Scans all solutions of the p = 2 system on (N, 2N] with t2 = N and
/// t4 = N^3 and reports the largest |n1 n2 - m1 m2| / N.
ProductGap lemma2_product_gap(std::int64_t N, std::uint64_t budget = kDefaultSpectrumBudget);

}  // namespace qmv
