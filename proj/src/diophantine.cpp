// SPDX-License-Identifier: Apache-2.0

#include "qmv/diophantine.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qmv/phase.hpp"

namespace qmv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParameterError("malformed integer '" + std::string(s) + "'");
  return v;
}

void validate(const BoxQuery& q) {
  if (q.p < 1 || q.p > 5) throw ParameterError("p must lie in 1..5");
  if (q.range.empty()) throw ParameterError("box range is empty");
  if (q.t2.den <= 0 || q.t4.den <= 0) throw ParameterError("threshold denominators must be positive");
}

// |d| * den <= num, exactly. A product that overflows is necessarily larger
// than any 64-bit num.
bool within(i128 d, const Rational& t) {
  if (t.num < 0) return false;
  if (d < 0) d = -d;
  i128 prod = 0;
  if (__builtin_mul_overflow(d, static_cast<i128>(t.den), &prod)) return false;
  return prod <= t.num;
}

i128 isqrt(i128 v) {
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i, std::int64_t delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += static_cast<std::uint64_t>(delta);
  }
  // Sum over [0, i).
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  Rational r;
  if (slash == std::string_view::npos) {
    r = {parse_int(text), 1};
  } else {
    r = {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
  }
  if (r.den == 0) throw ParameterError("rational with zero denominator");
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

CountResult count_bruteforce(const BoxQuery& q, std::uint64_t budget) {
  validate(q);
  const auto t0 = Clock::now();
  const double pairs = power_count(q.range.size(), 2 * q.p);
  if (pairs > static_cast<double>(budget))
    throw ResourceError("brute-force count needs " + format_count(pairs) +
                            " pair evaluations, budget is " + std::to_string(budget),
                        pairs);

  // Every p-tuple, in odometer order, with its power sums computed directly.
  const auto L = static_cast<std::size_t>(q.range.size());
  const auto tuples = static_cast<std::size_t>(power_count(q.range.size(), q.p));
  std::vector<i128> s2(tuples), s4(tuples);
  std::vector<std::size_t> digit(static_cast<std::size_t>(q.p), 0);
  for (std::size_t t = 0; t < tuples; ++t) {
    i128 a = 0, b = 0;
    for (int i = 0; i < q.p; ++i) {
      const i128 n = q.range.first + static_cast<std::int64_t>(digit[static_cast<std::size_t>(i)]);
      a += n * n;
      b += n * n * n * n;
    }
    s2[t] = a;
    s4[t] = b;
    for (std::size_t i = 0; i < digit.size(); ++i) {
      if (++digit[i] < L) break;
      digit[i] = 0;
    }
  }

  std::uint64_t count = 0;
  for (std::size_t i = 0; i < tuples; ++i)
    for (std::size_t j = 0; j < tuples; ++j)
      if (within(s2[i] - s2[j], q.t2) && within(s4[i] - s4[j], q.t4)) ++count;
  return {count, CountMethod::bruteforce, seconds_since(t0)};
}

CountResult count_spectral(const PhaseSpectrum& spectrum, Rational t2, Rational t4) {
  const auto t0 = Clock::now();
  if (t2.den <= 0 || t4.den <= 0) throw ParameterError("threshold denominators must be positive");
  if (t2.negative() || t4.negative()) return {0, CountMethod::spectral, seconds_since(t0)};
  // Differences are integers, so |d| <= num/den iff |d| <= floor(num/den).
  const std::int64_t w2 = t2.floor();
  const i128 w4 = t4.floor();

  const auto entries = spectrum.entries();
  std::vector<i128> keys;
  keys.reserve(entries.size());
  for (const auto& e : entries) keys.push_back(e.s4);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto rank = [&](i128 v) {
    return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), v) - keys.begin());
  };
  auto rank_upper = [&](i128 v) {
    return static_cast<std::size_t>(std::upper_bound(keys.begin(), keys.end(), v) - keys.begin());
  };
  std::vector<std::size_t> own_rank(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) own_rank[i] = rank(entries[i].s4);

  Fenwick window(keys.size());
  std::size_t lo = 0, hi = 0;
  u128 total = 0;
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const std::int64_t s2 = entries[a].s2;
    while (hi < entries.size() && entries[hi].s2 - s2 <= w2) {
      window.add(own_rank[hi], static_cast<std::int64_t>(entries[hi].mult));
      ++hi;
    }
    while (lo < hi && s2 - entries[lo].s2 > w2) {
      window.add(own_rank[lo], -static_cast<std::int64_t>(entries[lo].mult));
      ++lo;
    }
    const std::size_t r0 = rank(entries[a].s4 - w4);
    const std::size_t r1 = rank_upper(entries[a].s4 + w4);
    const std::uint64_t partners = window.prefix(r1) - window.prefix(r0);
    total += static_cast<u128>(entries[a].mult) * partners;
  }
  if (total > static_cast<u128>(UINT64_MAX)) throw ResourceError("solution count exceeds 64 bits", 0.0);
  return {static_cast<std::uint64_t>(total), CountMethod::spectral, seconds_since(t0)};
}

CountResult count_spectral(const BoxQuery& q, std::uint64_t budget) {
  validate(q);
  const auto t0 = Clock::now();
  if (q.t2.negative() || q.t4.negative()) return {0, CountMethod::spectral, seconds_since(t0)};
  const PhaseSpectrum spectrum = build_spectrum(q.range, q.p, budget);
  CountResult r = count_spectral(spectrum, q.t2, q.t4);
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

double fejer_hat(double t) { return std::max(0.0, 1.0 - std::fabs(t)); }

double fejer_kernel(double y) {
  if (y == 0.0) return 1.0;
  const double x = std::numbers::pi * y;
  const double s = std::sin(x) / x;
  return s * s;
}

double fejer_weighted_count(const BoxQuery& q, double delta, double lambda, std::uint64_t budget) {
  validate(q);
  if (!(delta >= 0.0) || !(lambda >= 0.0) || !std::isfinite(delta) || !std::isfinite(lambda))
    throw ParameterError("delta and lambda must be finite and nonnegative");
  const PhaseSpectrum spectrum = build_spectrum(q.range, q.p, budget);
  const auto entries = spectrum.entries();
  // Outside |ds2| < 1/delta the s2 weight vanishes.
  const double reach = delta > 0.0 ? 1.0 / delta : INFINITY;

  KahanSum sum;
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const double s2a = static_cast<double>(entries[a].s2);
    auto first = std::lower_bound(entries.begin(), entries.end(), s2a - reach,
                                  [](const SpectrumEntry& e, double v) { return static_cast<double>(e.s2) < v; });
    for (auto it = first; it != entries.end() && static_cast<double>(it->s2) <= s2a + reach; ++it) {
      const double w2 = fejer_hat(delta * static_cast<double>(it->s2 - entries[a].s2));
      if (w2 == 0.0) continue;
      const double w4 = fejer_hat(lambda * static_cast<double>(it->s4 - entries[a].s4));
      if (w4 == 0.0) continue;
      sum.add(static_cast<double>(entries[a].mult) * static_cast<double>(it->mult) * w2 * w4);
    }
  }
  return sum.value();
}

ProductGap lemma2_product_gap(std::int64_t N, std::uint64_t budget) {
  if (N < 2) throw ParameterError("N must be at least 2");
  const PhaseSpectrum spectrum = build_spectrum(IntRange::open_closed(N, 2 * N), 2, budget);
  const auto entries = spectrum.entries();
  // For p = 2, s2^2 - s4 = 2 (n1 n2)^2, so the product is a function of the key.
  std::vector<i128> product(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const i128 s2 = entries[i].s2;
    product[i] = isqrt((s2 * s2 - entries[i].s4) / 2);
  }
  const i128 t4 = static_cast<i128>(N) * N * N;
  ProductGap gap;
  i128 widest = 0;
  std::size_t lo = 0;
  for (std::size_t a = 0; a < entries.size(); ++a) {
    while (entries[a].s2 - entries[lo].s2 > N) ++lo;
    for (std::size_t b = lo; b < entries.size() && entries[b].s2 - entries[a].s2 <= N; ++b) {
      const i128 d4 = entries[a].s4 - entries[b].s4;
      if (d4 > t4 || d4 < -t4) continue;
      gap.solutions += entries[a].mult * entries[b].mult;
      const i128 d = product[a] > product[b] ? product[a] - product[b] : product[b] - product[a];
      widest = std::max(widest, d);
    }
  }
  gap.max_ratio = static_cast<double>(widest) / static_cast<double>(N);
  return gap;
}

}  // namespace qmv
