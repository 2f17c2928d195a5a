// SPDX-License-Identifier: Apache-2.0

#include "qmv/exp_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmv {

namespace {

constexpr std::int64_t kMaxAbsEntry = std::int64_t{1} << 30;

cplx phase_unit(const QuarticPhase& phase, std::int64_t n) {
  const i128 n2 = static_cast<i128>(n) * n;
  const double t = frac_product(phase.alpha, n2) + frac_product(phase.gamma, n2 * n2);
  return unit(t);
}

void check_phase(const QuarticPhase& phase) {
  if (!std::isfinite(phase.alpha) || !std::isfinite(phase.gamma))
    throw ParameterError("phase frequencies must be finite");
}

}  // namespace

CoefficientSequence CoefficientSequence::ones(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("coefficient range (lo, hi] requires lo <= hi");
  return CoefficientSequence(lo, hi, std::vector<cplx>(static_cast<std::size_t>(hi - lo), cplx{1.0, 0.0}));
}

CoefficientSequence::CoefficientSequence(std::int64_t lo, std::int64_t hi, std::vector<cplx> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (hi < lo) throw ParameterError("coefficient range (lo, hi] requires lo <= hi");
  if (values_.size() != static_cast<std::size_t>(hi - lo))
    throw ParameterError("coefficient count must equal hi - lo");
  if (std::max(std::abs(lo), std::abs(hi)) > kMaxAbsEntry)
    throw ParameterError("coefficient range exceeds 2^30 in absolute value");
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1.0 + 1e-12)
      throw ParameterError("coefficients must be finite with modulus <= 1");
  }
}

bool CoefficientSequence::all_ones() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v == cplx{1.0, 0.0}; });
}

cplx eval_sum(const QuarticPhase& phase, const CoefficientSequence& coeffs, std::int64_t upper) {
  check_phase(phase);
  if (upper <= coeffs.lo() || upper > coeffs.hi())
    throw ParameterError("upper limit must satisfy lo < upper <= hi");
  CompensatedSum acc;
  for (std::int64_t n = coeffs.lo() + 1; n <= upper; ++n) acc += coeffs.at(n) * phase_unit(phase, n);
  return acc.value();
}

PartialSumMax max_partial_sum(const QuarticPhase& phase, const CoefficientSequence& coeffs) {
  check_phase(phase);
  if (coeffs.empty()) throw ParameterError("max_partial_sum needs a nonempty coefficient sequence");
  CompensatedSum acc;
  PartialSumMax best{cplx{}, coeffs.lo() + 1};
  double best_norm = -1.0;
  for (std::int64_t n = coeffs.lo() + 1; n <= coeffs.hi(); ++n) {
    acc += coeffs.at(n) * phase_unit(phase, n);
    const cplx v = acc.value();
    const double m = std::norm(v);
    // Strict comparison keeps the first (smallest) maximizer.
    if (m > best_norm) {
      best_norm = m;
      best = {v, n};
    }
  }
  return best;
}

PhaseSpectrum::PhaseSpectrum(int p, IntRange range, std::vector<SpectrumEntry> entries)
    : p_(p), range_(range), entries_(std::move(entries)) {}

std::uint64_t PhaseSpectrum::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.mult;
  return t;
}

namespace {

void sort_and_merge(std::vector<SpectrumEntry>& v) {
  std::sort(v.begin(), v.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return a.s2 != b.s2 ? a.s2 < b.s2 : a.s4 < b.s4;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (out > 0 && v[out - 1].s2 == v[i].s2 && v[out - 1].s4 == v[i].s4)
      v[out - 1].mult += v[i].mult;
    else
      v[out++] = v[i];
  }
  v.resize(out);
}

}  // namespace

PhaseSpectrum build_spectrum(IntRange range, int p, std::uint64_t budget) {
  if (p < 1 || p > 5) throw ParameterError("p must lie in 1..5");
  if (range.empty()) throw ParameterError("spectrum range is empty");
  if (range.max_abs() > kMaxAbsEntry) throw ParameterError("range entries exceed 2^30 in absolute value");
  const double tuples = power_count(range.size(), p);
  if (tuples > static_cast<double>(budget))
    throw ResourceError("spectrum needs " + format_count(tuples) +
                            " tuples, budget is " + std::to_string(budget),
                        tuples);

  std::vector<SpectrumEntry> base;
  base.reserve(static_cast<std::size_t>(range.size()));
  for (std::int64_t n = range.first; n <= range.last; ++n) {
    const i128 n2 = static_cast<i128>(n) * n;
    base.push_back({static_cast<std::int64_t>(n2), n2 * n2, 1});
  }
  sort_and_merge(base);

  std::vector<SpectrumEntry> current = base;
  for (int level = 2; level <= p; ++level) {
    std::vector<SpectrumEntry> next;
    next.reserve(current.size() * base.size());
    for (const auto& a : current)
      for (const auto& b : base) next.push_back({a.s2 + b.s2, a.s4 + b.s4, a.mult * b.mult});
    sort_and_merge(next);
    current = std::move(next);
  }
  return PhaseSpectrum(p, range, std::move(current));
}

}  // namespace qmv
