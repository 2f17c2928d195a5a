// SPDX-License-Identifier: Apache-2.0
//
// Exponential sums with phase alpha*n^2 + gamma*n^4 and the exact
// (s2, s4) multiplicity table over p-tuples that counting and moment
// evaluation are built on.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qmv/common.hpp"
#include "qmv/phase.hpp"

namespace qmv {

struct QuarticPhase {
  double alpha = 0.0;  // frequency on n^2
  double gamma = 0.0;  // frequency on n^4
};

/// Coefficients a_n for lo < n <= hi, each of modulus at most one.
class CoefficientSequence {
 public:
  /// All-ones coefficients on (lo, hi].
  static CoefficientSequence ones(std::int64_t lo, std::int64_t hi);
  CoefficientSequence(std::int64_t lo, std::int64_t hi, std::vector<cplx> values);

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  cplx at(std::int64_t n) const { return values_[static_cast<std::size_t>(n - lo_ - 1)]; }
  std::span<const cplx> values() const { return values_; }
  bool all_ones() const;

 private:
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<cplx> values_;
};

/// sum_{lo < n <= upper} a_n e(alpha n^2 + gamma n^4).
cplx eval_sum(const QuarticPhase& phase, const CoefficientSequence& coeffs, std::int64_t upper);

struct PartialSumMax {
  cplx value;
  std::int64_t argmax;
};

/// Partial sum of largest modulus over all upper limits in (lo, hi]. The
/// smallest upper limit wins ties.
PartialSumMax max_partial_sum(const QuarticPhase& phase, const CoefficientSequence& coeffs);

struct SpectrumEntry {
  std::int64_t s2;
  i128 s4;
  std::uint64_t mult;

  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Multiplicities r(s2, s4) of (n_1^2+...+n_p^2, n_1^4+...+n_p^4) over all
/// p-tuples drawn from `range`, sorted by (s2, s4).
class PhaseSpectrum {
 public:
  PhaseSpectrum(int p, IntRange range, std::vector<SpectrumEntry> entries);

  int p() const { return p_; }
  const IntRange& range() const { return range_; }
  std::span<const SpectrumEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Sum of multiplicities; equals range.size()^p.
  std::uint64_t total() const;

 private:
  int p_;
  IntRange range_;
  std::vector<SpectrumEntry> entries_;
};

inline constexpr std::uint64_t kDefaultSpectrumBudget = 20'000'000;

/// Builds the spectrum by repeated convolution of the single-variable table.
/// Throws ResourceError when range.size()^p exceeds `budget`.
PhaseSpectrum build_spectrum(IntRange range, int p,
                             std::uint64_t budget = kDefaultSpectrumBudget);

}  // namespace qmv
