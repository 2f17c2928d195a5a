// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qmv/diophantine.hpp"

using qmv::BoxQuery;
using qmv::IntRange;
using qmv::Rational;

namespace {

BoxQuery box(int p, IntRange r, Rational t2, Rational t4) { return {p, r, t2, t4}; }

Rational random_rational(std::mt19937_64& rng, std::int64_t scale) {
  std::uniform_int_distribution<std::int64_t> den(1, 7);
  std::uniform_int_distribution<std::int64_t> num(0, scale);
  const auto d = den(rng);
  return {num(rng) * d / 3, d};
}

}  // namespace

TEST(Rational, ParseAndFloor) {
  const auto r = Rational::parse("-7/2");
  EXPECT_EQ(r.num, -7);
  EXPECT_EQ(r.den, 2);
  EXPECT_EQ(r.floor(), -4);
  EXPECT_EQ(Rational::parse("12").floor(), 12);
  EXPECT_THROW(Rational::parse("1/0"), qmv::ParameterError);
  EXPECT_THROW(Rational::parse("x"), qmv::ParameterError);
}

TEST(CountBruteforce, DiagonalOnly) {
  EXPECT_EQ(qmv::count_bruteforce(box(1, IntRange::open_closed(4, 8), {0, 1}, {0, 1})).count, 4u);
}

TEST(CountBruteforce, FullBox) {
  EXPECT_EQ(qmv::count_bruteforce(box(1, IntRange::open_closed(4, 8), {64, 1}, {4096, 1})).count, 16u);
}

TEST(CountBruteforce, PairsOfPairs) {
  EXPECT_EQ(qmv::count_bruteforce(box(2, IntRange::open_closed(3, 6), {0, 1}, {0, 1})).count, 15u);
}

TEST(CountSpectral, PairsOfPairs) {
  EXPECT_EQ(qmv::count_spectral(box(2, IntRange::open_closed(3, 6), {0, 1}, {0, 1})).count, 15u);
}

TEST(CountSpectral, ZeroThresholdsMatchBruteforceAtSixteen) {
  const auto q = box(3, IntRange::open_closed(0, 16), {0, 1}, {0, 1});
  EXPECT_EQ(qmv::count_spectral(q).count, qmv::count_bruteforce(q).count);
}

TEST(CountSpectral, SingleVariableDiagonal) {
  for (std::int64_t lo : {0, 7, 20})
    EXPECT_EQ(qmv::count_spectral(box(1, IntRange::open_closed(lo, lo + 9), {0, 1}, {0, 1})).count, 9u);
}

TEST(CountSpectral, NegativeThresholdIsZero) {
  EXPECT_EQ(qmv::count_spectral(box(2, IntRange{1, 5}, {-1, 2}, {10, 1})).count, 0u);
  EXPECT_EQ(qmv::count_bruteforce(box(2, IntRange{1, 5}, {3, 1}, {-1, 1})).count, 0u);
}

TEST(CountSpectral, OracleEquivalenceRandomThresholds) {
  std::mt19937_64 rng(20240601);
  for (int p = 1; p <= 3; ++p) {
    for (std::int64_t len = 3; len <= 8; ++len) {
      const IntRange r = IntRange::open_closed(len, 2 * len);
      const std::int64_t m2 = p * (4 * len * len), m4 = p * (16 * len * len * len * len);
      for (int i = 0; i < 20; ++i) {
        const auto q = box(p, r, random_rational(rng, m2 / 4), random_rational(rng, m4 / 8));
        ASSERT_EQ(qmv::count_spectral(q).count, qmv::count_bruteforce(q).count)
            << "p=" << p << " len=" << len << " t2=" << q.t2.num << "/" << q.t2.den;
      }
    }
  }
}

TEST(CountSpectral, MonotoneInBothThresholds) {
  const IntRange r = IntRange::open_closed(6, 12);
  for (int p = 1; p <= 3; ++p) {
    std::uint64_t prev = 0;
    for (std::int64_t t = 0; t <= 40; t += 4) {
      const auto c = qmv::count_spectral(box(p, r, {t, 1}, {t * t * 10, 1})).count;
      EXPECT_GE(c, prev);
      prev = c;
    }
    prev = 0;
    for (std::int64_t t4 = 0; t4 <= 20000; t4 += 2500) {
      const auto c = qmv::count_spectral(box(p, r, {5, 1}, {t4, 1})).count;
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(CountSpectral, SharedSpectrumOverload) {
  const auto s = qmv::build_spectrum(IntRange{0, 10}, 2);
  const auto a = qmv::count_spectral(s, {3, 1}, {500, 1}).count;
  const auto b = qmv::count_bruteforce(box(2, IntRange{0, 10}, {3, 1}, {500, 1})).count;
  EXPECT_EQ(a, b);
}

TEST(CountSpectral, SymmetricUnderReflection) {
  // Negating every entry keeps (s2, s4) and hence the count.
  const auto a = qmv::count_spectral(box(2, IntRange{1, 9}, {7, 2}, {300, 1})).count;
  const auto b = qmv::count_spectral(box(2, IntRange{-9, -1}, {7, 2}, {300, 1})).count;
  EXPECT_EQ(a, b);
}

TEST(CountBruteforce, RefusesOverBudget) {
  EXPECT_THROW(qmv::count_bruteforce(box(3, IntRange{0, 100}, {0, 1}, {0, 1}), 1000), qmv::ResourceError);
}

TEST(Fejer, HatValues) {
  EXPECT_DOUBLE_EQ(qmv::fejer_hat(0.0), 1.0);
  EXPECT_DOUBLE_EQ(qmv::fejer_hat(1.0), 0.0);
  EXPECT_DOUBLE_EQ(qmv::fejer_hat(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(qmv::fejer_hat(0.25), 0.75);
  EXPECT_DOUBLE_EQ(qmv::fejer_hat(3.0), 0.0);
}

TEST(Fejer, KernelValues) {
  EXPECT_DOUBLE_EQ(qmv::fejer_kernel(0.0), 1.0);
  EXPECT_NEAR(qmv::fejer_kernel(1.0), 0.0, 1e-15);
  EXPECT_NEAR(qmv::fejer_kernel(0.5), 4.0 / (M_PI * M_PI), 1e-15);
  EXPECT_NEAR(qmv::fejer_kernel(1e-9), 1.0, 1e-12);
}

TEST(Fejer, IndicatorSandwich) {
  for (int i = 0; i <= 10000; ++i) {
    const double y = -0.5 + i / 10000.0;
    EXPECT_LE(1.0, M_PI * M_PI / 4.0 * qmv::fejer_kernel(y) + 1e-12) << y;
  }
}

TEST(FejerWeightedCount, ZeroWindowsWeightEverything) {
  EXPECT_DOUBLE_EQ(qmv::fejer_weighted_count(box(1, IntRange::open_closed(4, 8), {0, 1}, {0, 1}), 0, 0), 16.0);
}

TEST(FejerWeightedCount, UnitWindowsKeepExactSolutions) {
  EXPECT_NEAR(qmv::fejer_weighted_count(box(1, IntRange::open_closed(4, 8), {0, 1}, {0, 1}), 1, 1), 4.0, 1e-12);
  EXPECT_NEAR(qmv::fejer_weighted_count(box(2, IntRange::open_closed(3, 6), {0, 1}, {0, 1}), 1, 1), 15.0, 1e-12);
  const auto q = box(3, IntRange::open_closed(5, 12), {0, 1}, {0, 1});
  EXPECT_NEAR(qmv::fejer_weighted_count(q, 1, 1), static_cast<double>(qmv::count_spectral(q).count), 1e-9);
}

TEST(FejerWeightedCount, BoundedByWindowCount) {
  // hat <= 1 on |t| <= 1 and 0 outside, so the weighted count is at most the box count.
  const auto q = box(2, IntRange::open_closed(4, 10), {0, 1}, {0, 1});
  const double w = qmv::fejer_weighted_count(q, 0.1, 0.001);
  const auto c = qmv::count_spectral(box(2, q.range, {10, 1}, {1000, 1})).count;
  EXPECT_LE(w, static_cast<double>(c) + 1e-9);
  EXPECT_GE(w, static_cast<double>(qmv::count_spectral(q).count) - 1e-9);
}

TEST(Lemma2ProductGap, SmallRatios) {
  const auto g8 = qmv::lemma2_product_gap(8);
  const auto g16 = qmv::lemma2_product_gap(16);
  EXPECT_LE(g8.max_ratio, 3.0);
  EXPECT_LE(g16.max_ratio, 3.0);
  EXPECT_GT(g8.solutions, 0u);
  EXPECT_GT(g16.solutions, g8.solutions);
  EXPECT_THROW(qmv::lemma2_product_gap(1), qmv::ParameterError);
}

TEST(TheoremOnePrimeShape, CountsDominateCube) {
  for (std::int64_t N : {16, 32}) {
    const auto c = qmv::count_spectral(box(3, IntRange{0, N}, {0, 1}, {N * N * N, 1})).count;
    EXPECT_GE(static_cast<double>(c), std::pow(static_cast<double>(N), 3));
  }
}
