// SPDX-License-Identifier: Apache-2.0

#include "qmv/weyl.hpp"

#include <cmath>
#include <string>

namespace qmv {

namespace {

u128 mulmod(u128 a, u128 b, u128 m) { return (a % m) * (b % m) % m; }

u128 powmod(u128 base, int exp, u128 m) {
  u128 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

void check_weyl(int k, std::int64_t N) {
  if (k < 1) throw ParameterError("k must be at least 1");
  if (N < 1) throw ParameterError("N must be at least 1");
}

// frac(alpha) = m / 2^s with m odd, or s = 0 when alpha is an integer.
struct Dyadic {
  std::uint64_t m = 0;
  int s = 0;
};

Dyadic dyadic_fraction(double alpha) {
  const double f = alpha - std::floor(alpha);
  Dyadic d;
  if (f == 0.0) return d;
  int exp = 0;
  const double mant = std::frexp(f, &exp);
  d.m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  d.s = 53 - exp;
  while ((d.m & 1u) == 0 && d.s > 0) {
    d.m >>= 1;
    --d.s;
  }
  return d;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// sum_{i=0}^{n-1} floor((a i + b) / m) for a, b >= 0, m > 0.
mpz_class floor_sum(mpz_class n, mpz_class m, mpz_class a, mpz_class b) {
  mpz_class ans = 0;
  while (true) {
    if (a >= m) {
      ans += (n - 1) * n / 2 * (a / m);
      a %= m;
    }
    if (b >= m) {
      ans += n * (b / m);
      b %= m;
    }
    const mpz_class y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

}  // namespace

double dist_to_integer(double x) { return std::fabs(x - std::nearbyint(x)); }

WeylSum weyl_sum(int k, std::int64_t N, double alpha) {
  check_weyl(k, N);
  if (!std::isfinite(alpha)) throw ParameterError("alpha must be finite");
  WeylSum out;
  const double scale = static_cast<double>(k) * std::log2(static_cast<double>(N)) +
                       (alpha != 0.0 ? std::log2(std::fabs(alpha)) : -2000.0);
  out.precision_warning = scale - 53.0 > std::log2(1e-6);

  const Dyadic d = dyadic_fraction(alpha);
  CompensatedSum acc;
  if (d.s == 0) {
    acc += cplx{static_cast<double>(N), 0.0};
  } else if (d.s <= 127) {
    const u128 mask = (u128{1} << d.s) - 1;
    for (std::int64_t n = 1; n <= N; ++n) {
      u128 pw = 1;
      for (int i = 0; i < k; ++i) pw *= static_cast<u128>(n);  // wraps mod 2^128
      const u128 r = (pw * d.m) & mask;
      acc += unit(std::ldexp(static_cast<double>(r), -d.s));
    }
  } else {
    const mpz_class modulus = mpz_class(1) << d.s;
    mpz_class r;
    for (std::int64_t n = 1; n <= N; ++n) {
      mpz_class base = static_cast<unsigned long>(n);
      mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k), modulus.get_mpz_t());
      r = (r * static_cast<unsigned long>(d.m)) % modulus;
      const mpq_class phase(r, modulus);
      acc += unit(phase.get_d());
    }
  }
  out.value = acc.value();
  return out;
}

WeylSum weyl_sum_rational(int k, std::int64_t N, std::int64_t a, std::int64_t q) {
  check_weyl(k, N);
  if (q < 1) throw ParameterError("denominator q must be >= 1");
  const u128 uq = static_cast<u128>(q);
  std::int64_t ar = a % q;
  if (ar < 0) ar += q;
  CompensatedSum acc;
  for (std::int64_t n = 1; n <= N; ++n) {
    const u128 r = mulmod(static_cast<u128>(ar), powmod(static_cast<u128>(n), k, uq), uq);
    acc += unit(static_cast<double>(r) / static_cast<double>(q));
  }
  return {acc.value(), false};
}

std::int64_t near_integer_count(double alpha, std::int64_t H, double delta) {
  if (H < 1) throw ParameterError("H must be >= 1");
  if (!(delta >= 0.0) || !std::isfinite(alpha)) throw ParameterError("need finite alpha and delta >= 0");
  std::int64_t count = 0;
  for (std::int64_t h = 1; h <= H; ++h)
    if (dist_to_integer(frac_product(alpha, h)) <= delta) ++count;
  return count;
}

std::int64_t near_integer_count_exact(const mpq_class& alpha, std::int64_t H, const mpq_class& delta) {
  if (H < 1) throw ParameterError("H must be >= 1");
  if (delta < 0) throw ParameterError("delta must be >= 0");
  if (delta * 2 >= 1) return H;
  // With 2 delta < 1 each h has at most one integer in [h alpha - delta, h alpha + delta]:
  // count_h = floor(h alpha + delta) + floor(delta - h alpha) + 1.
  const mpz_class Q = alpha.get_den();
  mpz_class A = alpha.get_num() % Q;
  if (A < 0) A += Q;
  const mpz_class D = delta.get_num(), E = delta.get_den();
  const mpz_class M = Q * E, AE = A * E, DQ = D * Q;
  const mpz_class n = H;

  const mpz_class up = floor_sum(n, M, AE, AE + DQ);
  mpz_class b = DQ - AE * n;
  mpz_class shift = 0;
  if (b < 0) {
    shift = floor_div(-b + M - 1, M);
    b += shift * M;
  }
  const mpz_class down = floor_sum(n, M, AE, b) - shift * n;
  const mpz_class total = up + down + n;
  return total.get_si();
}

RationalApprox best_rational(double alpha, std::int64_t Q) {
  if (Q < 1) throw ParameterError("Q must be >= 1");
  if (!std::isfinite(alpha)) throw ParameterError("alpha must be finite");
  const mpq_class x(alpha);
  // Convergents p_n/q_n of the exact binary value of alpha.
  mpz_class num = x.get_num(), den = x.get_den();
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p_cur = floor_div(num, den), q_cur = 1;
  mpz_class rem_num = den, rem_den = num - p_cur * den;
  while (rem_den != 0) {
    const mpz_class a = floor_div(rem_num, rem_den);
    const mpz_class q_next = a * q_cur + q_prev;
    if (q_next > Q) break;
    const mpz_class p_next = a * p_cur + p_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    const mpz_class r = rem_num - a * rem_den;
    rem_num = rem_den;
    rem_den = r;
  }
  if (!p_cur.fits_slong_p()) throw ParameterError("numerator of the approximation exceeds 64 bits");
  RationalApprox out;
  out.a = p_cur.get_si();
  out.q = q_cur.get_si();
  out.theta = mpq_class(x - mpq_class(p_cur, q_cur)).get_d();
  return out;
}

HeathBrownBounds heathbrown_bounds(const RationalApprox& r, std::int64_t H, double delta) {
  if (r.q < 1) throw ParameterError("q must be >= 1");
  if (H < 1 || !(delta >= 0.0)) throw ParameterError("need H >= 1 and delta >= 0");
  const double q = static_cast<double>(r.q);
  const double h = static_cast<double>(H);
  HeathBrownBounds b;
  b.bound1 = 4.0 * (1.0 + q * delta) * (1.0 + h / q);
  if (r.theta != 0.0) {
    const double qt = q * std::fabs(r.theta);
    b.bound2 = 8.0 * (1.0 + delta / qt) * (1.0 + qt * h);
  }
  return b;
}

std::vector<mpq_class> symmetric_differences(int k, int r, std::span<const std::int64_t> h,
                                             const mpq_class& alpha) {
  if (k < 1 || r < 0 || r > k) throw ParameterError("need k >= 1 and 0 <= r <= k");
  if (h.size() != static_cast<std::size_t>(r)) throw ParameterError("need exactly r shifts");
  for (std::int64_t v : h)
    if (v == 0) throw ParameterError("shifts must be nonzero");

  std::vector<mpq_class> poly(static_cast<std::size_t>(k) + 1, mpq_class(0));
  poly[static_cast<std::size_t>(k)] = alpha;
  for (std::int64_t shift : h) {
    // (x + h)^i - (x - h)^i keeps only the odd powers of h, doubled.
    std::vector<mpq_class> next(poly.size() - 1, mpq_class(0));
    for (std::size_t i = 1; i < poly.size(); ++i) {
      if (poly[i] == 0) continue;
      mpz_class binom = 1;
      mpz_class hpow = 1;
      for (std::size_t t = 1; t <= i; ++t) {
        binom = binom * static_cast<unsigned long>(i - t + 1) / static_cast<unsigned long>(t);
        hpow *= shift;
        if (t % 2 == 1) next[i - t] += poly[i] * mpq_class(2 * binom * hpow);
      }
    }
    poly = std::move(next);
  }
  return poly;
}

Theorem4Report theorem4_report(int k, std::int64_t N, double alpha, double epsilon) {
  if (k < 8) throw ParameterError("the bound is stated for k >= 8");
  if (N < 2) throw ParameterError("N must be at least 2");
  if (!std::isfinite(alpha) || !(epsilon >= 0.0)) throw ParameterError("need finite alpha and epsilon >= 0");

  mpz_class fact = 1;
  for (int i = 5; i <= k; ++i) fact *= i;  // k!/4!
  mpz_class Npow;
  mpz_ui_pow_ui(Npow.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(k - 4));
  const mpz_class H = 16 * fact * Npow;
  if (!H.fits_slong_p()) throw ParameterError("H = 16 (k!/4!) N^(k-4) exceeds 64 bits");

  Theorem4Report t;
  t.k = k;
  t.N = N;
  t.alpha = alpha;
  t.epsilon = epsilon;
  t.H = H.get_si();
  const double Nd = static_cast<double>(N);
  t.delta = 1.0 / (Nd * Nd * Nd * Nd);
  t.K = std::ldexp(1.0, k);
  t.exponent_main = 1.0 - 16.0 / t.K;
  t.exponent_secondary = 1.0 - 3.0 / t.K;

  mpz_class N4;
  mpz_ui_pow_ui(N4.get_mpz_t(), static_cast<unsigned long>(N), 4);
  t.B = near_integer_count_exact(mpq_class(alpha), t.H, mpq_class(mpz_class(1), N4));

  const WeylSum s = weyl_sum(k, N, alpha);
  t.lhs = std::abs(s.value);
  t.precision_warning = s.precision_warning;
  const double Hd = static_cast<double>(t.H);
  const double normalized_B = static_cast<double>(t.B) / (Hd * t.delta);
  t.rhs = std::pow(Nd, t.exponent_main) +
          std::pow(Nd, t.exponent_secondary + epsilon) * std::pow(normalized_B, 8.0 / (5.0 * t.K));
  t.ratio = t.lhs / t.rhs;

  t.approx = best_rational(alpha, t.H);
  const double q = static_cast<double>(t.approx.q);
  t.corollary_q_window = q >= Nd * Nd * Nd * Nd && q <= std::pow(Nd, k - 4);
  const double tq = std::fabs(t.approx.theta) * q;
  t.corollary_theta_window = tq >= std::pow(Nd, -(k - 4)) && tq <= t.delta;
  t.probabilistic_B = std::pow(Hd, 1.0 + epsilon) * t.delta + std::pow(Hd, epsilon);
  t.probabilistic_rhs = std::pow(Nd, 1.0 + epsilon - 3.0 / t.K) * std::pow(1.0 + std::pow(Nd, 8 - k), 8.0 / (5.0 * t.K));
  return t;
}

std::uint64_t sieve_pair_count(std::span<const double> a_values, std::span<const double> b_values,
                               std::int64_t N) {
  if (a_values.size() != b_values.size()) throw ParameterError("a and b lists must have equal length");
  if (a_values.empty()) throw ParameterError("need H >= 1");
  if (N < 1) throw ParameterError("N must be >= 1");
  const double Nd = static_cast<double>(N);
  const double ta = 1.0 / (Nd * Nd * Nd * Nd);
  const double tb = 1.0 / (Nd * Nd);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < a_values.size(); ++i)
    for (std::size_t j = 0; j < a_values.size(); ++j)
      if (dist_to_integer(a_values[i] - a_values[j]) <= ta && dist_to_integer(b_values[i] - b_values[j]) <= tb)
        ++count;
  return count;
}

}  // namespace qmv
