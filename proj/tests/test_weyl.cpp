// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qmv/weyl.hpp"

namespace {

// Independent count with exact rational alpha = a/q and delta = d/e.
std::int64_t rational_near_count(std::int64_t a, std::int64_t q, std::int64_t H, std::int64_t d, std::int64_t e) {
  std::int64_t count = 0;
  for (std::int64_t h = 1; h <= H; ++h) {
    // || h a / q || <= d / e  <=>  min(r, q - r) * e <= d * q with r = h a mod q
    const std::int64_t r = ((h % q) * (a % q)) % q;
    const std::int64_t dist = std::min(r, q - r);
    if (static_cast<__int128>(dist) * e <= static_cast<__int128>(d) * q) ++count;
  }
  return count;
}

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST(WeylSum, Examples) {
  for (int k : {1, 2, 5, 9}) EXPECT_NEAR(std::abs(qmv::weyl_sum(k, 37, 0.0).value - qmv::cplx(37, 0)), 0.0, 1e-12);
  EXPECT_LT(std::abs(qmv::weyl_sum(2, 4, 0.5).value), 1e-12);
  EXPECT_LT(std::abs(qmv::weyl_sum_rational(3, 3, 1, 3).value), 1e-12);
  EXPECT_LT(std::abs(qmv::weyl_sum(3, 3, 1.0 / 3).value), 1e-12);
}

TEST(WeylSum, BoundedAndPeriodic) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> qd(2, 1000);
  for (int i = 0; i < 50; ++i) {
    const std::int64_t q = qd(rng);
    const std::int64_t a = qd(rng) % q;
    const int k = 1 + i % 10;
    const std::int64_t N = 500;
    const auto s = qmv::weyl_sum_rational(k, N, a, q).value;
    const auto t = qmv::weyl_sum_rational(k, N, a + q, q).value;
    EXPECT_LE(std::abs(s), static_cast<double>(N) + 1e-9);
    EXPECT_LT(std::abs(s - t), 1e-9);
  }
}

TEST(WeylSum, DyadicPathMatchesRational) {
  // alpha = 5/64 is exact in binary, so both paths see the same number.
  for (int k : {2, 4, 8, 10}) {
    const auto a = qmv::weyl_sum(k, 1000, 5.0 / 64).value;
    const auto b = qmv::weyl_sum_rational(k, 1000, 5, 64).value;
    EXPECT_LT(std::abs(a - b), 1e-9);
  }
}

TEST(WeylSum, PrecisionWarning) {
  EXPECT_FALSE(qmv::weyl_sum(2, 1000, 0.3).precision_warning);
  EXPECT_TRUE(qmv::weyl_sum(10, 1000, 0.3).precision_warning);
}

TEST(NearIntegerCount, Examples) {
  EXPECT_EQ(qmv::near_integer_count(0.0, 17, 0.01), 17);
  EXPECT_EQ(qmv::near_integer_count(1.0 / 3, 10, 0.1), 3);
  EXPECT_EQ(qmv::near_integer_count_exact(mpq_class(1, 3), 10, mpq_class(1, 10)), 3);
}

TEST(NearIntegerCount, MatchesRationalOracle) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::int64_t> qd(1, 5000), hd(1, 3000), ed(5, 1000);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t q = qd(rng);
    const std::int64_t a = qd(rng) % q;
    const std::int64_t H = hd(rng);
    const std::int64_t e = ed(rng);
    const std::int64_t d = qd(rng) % (e / 2);
    const auto want = rational_near_count(a, q, H, d, e);
    mpq_class alpha(a, q), delta(d, e);
    alpha.canonicalize();
    delta.canonicalize();
    ASSERT_EQ(qmv::near_integer_count_exact(alpha, H, delta), want) << a << "/" << q << " H=" << H;
  }
}

TEST(NearIntegerCount, DoubleLoopMatchesExactOffTies) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), d = 0.2 * u(rng);
    EXPECT_EQ(qmv::near_integer_count(a, 2000, d), qmv::near_integer_count_exact(mpq_class(a), 2000, mpq_class(d)));
  }
}

TEST(BestRational, Examples) {
  auto r = qmv::best_rational(0.3, 10);
  EXPECT_EQ(r.a, 3);
  EXPECT_EQ(r.q, 10);
  EXPECT_NEAR(r.theta, 0.0, 1e-16);
  r = qmv::best_rational(0.5, 10);
  EXPECT_EQ(r.a, 1);
  EXPECT_EQ(r.q, 2);
  EXPECT_EQ(r.theta, 0.0);
  r = qmv::best_rational(std::sqrt(2.0) - 1, 12);
  EXPECT_EQ(r.a, 5);
  EXPECT_EQ(r.q, 12);
  EXPECT_NEAR(r.theta, -0.00245, 1e-5);
  EXPECT_LE(std::fabs(r.theta), 1.0 / 144);
}

TEST(BestRational, ConvergentInvariants) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<std::int64_t> Qd(1, 1000000);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = u(rng);
    const auto Q = Qd(rng);
    const auto r = qmv::best_rational(alpha, Q);
    EXPECT_GE(r.q, 1);
    EXPECT_LE(r.q, Q);
    EXPECT_EQ(std::gcd(r.a, r.q), 1);
    EXPECT_LE(std::fabs(r.theta) * static_cast<double>(r.q) * static_cast<double>(r.q), 1.0 + 1e-9);
  }
}

TEST(HeathBrownBounds, Examples) {
  const auto b = qmv::heathbrown_bounds({0, 1, 0.0}, 10, 0.1);
  EXPECT_NEAR(b.bound1, 4 * 1.1 * 11, 1e-12);
  EXPECT_FALSE(b.bound2.has_value());
  const auto c = qmv::heathbrown_bounds({1, 3, 0.0}, 10, 0.1);
  EXPECT_NEAR(c.bound1, 4 * 1.3 * (1 + 10.0 / 3), 1e-12);
  EXPECT_GE(c.bound1, 3.0);
}

TEST(HeathBrownBounds, NeverViolated) {
  std::mt19937_64 rng(47);
  constexpr std::int64_t kScale = std::int64_t{1} << 53;
  std::uniform_int_distribution<std::int64_t> an(0, kScale - 1), dn(1, kScale / 5), hd(1, 10000);
  for (int i = 0; i < 1000; ++i) {
    const auto a = an(rng), d = dn(rng), H = hd(rng);
    const double alpha = std::ldexp(static_cast<double>(a), -53), delta = std::ldexp(static_cast<double>(d), -53);
    const auto r = qmv::best_rational(alpha, H);
    const auto B = qmv::near_integer_count_exact(mpq_class(alpha), H, mpq_class(delta));
    const auto b = qmv::heathbrown_bounds(r, H, delta);
    EXPECT_LE(static_cast<double>(B), b.bound1);
    if (b.bound2) EXPECT_LE(static_cast<double>(B), *b.bound2);
  }
}

TEST(SymmetricDifferences, LinearCase) {
  const std::vector<std::int64_t> h{3};
  const auto c = qmv::symmetric_differences(2, 1, h, mpq_class(2, 7));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], 0);
  EXPECT_EQ(c[1], mpq_class(4 * 3 * 2, 7));
}

TEST(SymmetricDifferences, DegreeAndLeadingCoefficient) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<std::int64_t> hd(-9, 9);
  for (int k = 4; k <= 12; ++k) {
    for (int r = 0; r <= k - 4; ++r) {
      std::vector<std::int64_t> h;
      mpz_class prod = 1;
      for (int i = 0; i < r; ++i) {
        std::int64_t v = 0;
        while (v == 0) v = hd(rng);
        h.push_back(v);
        prod *= v;
      }
      const mpq_class alpha(3, 11);
      const auto c = qmv::symmetric_differences(k, r, h, alpha);
      ASSERT_EQ(c.size(), static_cast<std::size_t>(k - r + 1));
      const mpq_class want = mpq_class(mpz_class(1) << r) * mpq_class(factorial(k) / factorial(k - r)) * prod * alpha;
      EXPECT_EQ(c.back(), want) << "k=" << k << " r=" << r;
    }
  }
}

TEST(SymmetricDifferences, QuarticCoefficientForUnitShifts) {
  const std::vector<std::int64_t> h{1, 1, 1, 1};
  const auto c = qmv::symmetric_differences(8, 4, h, mpq_class(1));
  ASSERT_EQ(c.size(), 5u);
  EXPECT_EQ(c[4], 26880);
}

TEST(Theorem4Report, ExponentsAndH) {
  const auto t = qmv::theorem4_report(8, 10, 0.123);
  EXPECT_DOUBLE_EQ(t.K, 256.0);
  EXPECT_DOUBLE_EQ(t.exponent_main, 0.9375);
  EXPECT_NEAR(t.exponent_secondary, 0.98828, 1e-5);
  EXPECT_EQ(t.H, 268800000);
  EXPECT_DOUBLE_EQ(t.delta, 1e-4);
  EXPECT_GE(t.B, 0);
  EXPECT_LE(t.B, t.H);
}

TEST(Theorem4Report, ZeroAlphaDominated) {
  const auto t = qmv::theorem4_report(8, 100, 0.0);
  EXPECT_EQ(t.B, t.H);
  EXPECT_DOUBLE_EQ(t.lhs, 100.0);
  EXPECT_LE(t.ratio, 1.0);
}

TEST(Theorem4Report, RejectsOverflowingH) {
  EXPECT_THROW(qmv::theorem4_report(12, 10000, 0.3), qmv::ParameterError);
  EXPECT_THROW(qmv::theorem4_report(3, 10, 0.3), qmv::ParameterError);
}

TEST(SievePairCount, Examples) {
  const std::vector<double> same(12, 0.25);
  EXPECT_EQ(qmv::sieve_pair_count(same, same, 10), 144u);
  std::vector<double> a, b;
  for (int i = 0; i < 12; ++i) {
    a.push_back(0.05 * i);
    b.push_back(0.07 * i);
  }
  EXPECT_EQ(qmv::sieve_pair_count(a, b, 10), 12u);
}

TEST(SievePairCount, MatchesDoubleLoopAndDominatesDiagonal) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::int64_t N = 3;
    std::vector<double> a, b;
    for (int i = 0; i < 200; ++i) {
      a.push_back(std::floor(u(rng) * 20) / 20);
      b.push_back(std::floor(u(rng) * 5) / 5);
    }
    std::uint64_t want = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double da = a[i] - a[j], db = b[i] - b[j];
        if (std::fabs(da - std::nearbyint(da)) <= 1.0 / 81 && std::fabs(db - std::nearbyint(db)) <= 1.0 / 9) ++want;
      }
    const auto got = qmv::sieve_pair_count(a, b, N);
    EXPECT_EQ(got, want);
    EXPECT_GE(got, a.size());
  }
}
