// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Runs through the public C API only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qmv/qmv.h"

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> body;
};

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ok(qmv_status s) {
  if (s != QMV_OK) throw CheckFailed(std::string("library error: ") + qmv_last_error());
}

std::uint64_t count(int p, qmv_range r, qmv_rational t2, qmv_rational t4, qmv_count_method m) {
  const qmv_box box{p, r, t2, t4};
  std::uint64_t c = 0;
  ok(qmv_count(&box, m, 0, &c, nullptr));
  return c;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double s = 0, icpt = 0, res = 0;
  ok(qmv_fit_exponent(xs.data(), ys.data(), xs.size(), &s, &icpt, &res));
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. spectral and brute-force counts agree exactly on random rational boxes
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::int64_t> den(1, 9);
  std::uniform_real_distribution<double> frac(0, 1);
  int checked = 0, mismatches = 0;
  for (int p = 1; p <= 3; ++p) {
    for (std::int64_t len = 3; len <= 8; ++len) {
      const qmv_range r{len + 1, 2 * len};
      const double max2 = p * 4.0 * len * len, max4 = p * 16.0 * len * len * len * len;
      for (int i = 0; i < 20; ++i) {
        const std::int64_t d2 = den(rng), d4 = den(rng);
        // Thresholds spread over [0, max/4] so that both sparse and dense boxes occur.
        const qmv_rational t2{static_cast<std::int64_t>(frac(rng) * frac(rng) * max2 / 4 * d2), d2};
        const qmv_rational t4{static_cast<std::int64_t>(frac(rng) * frac(rng) * max4 / 4 * d4), d4};
        ++checked;
        if (count(p, r, t2, t4, QMV_COUNT_SPECTRAL) != count(p, r, t2, t4, QMV_COUNT_BRUTEFORCE)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checked) + " boxes, " + std::to_string(mismatches) + " mismatches"};
}

// 2. full-square moment equals the zero-threshold count
Outcome parseval() {
  double worst = 0;
  for (int p = 1; p <= 3; ++p) {
    for (std::int64_t len : {4, 8, 12, 16}) {
      const qmv_range r{len + 1, 2 * len};
      const qmv_moment_query q{p, r, 0, 1, 0, 1, nullptr};
      qmv_moment_result m{};
      ok(qmv_moment(&q, QMV_MOMENT_EXACT, 0, 0, &m));
      const double c = static_cast<double>(count(p, r, {0, 1}, {0, 1}, QMV_COUNT_SPECTRAL));
      worst = std::max(worst, std::fabs(m.value - c) / c);
    }
  }
  return {worst <= 1e-6, "max relative error " + fmt("%.3e", worst)};
}

// 3. count over [0, N] with t2 = 0, t4 = N^3 grows like N^3
Outcome theorem1_prime_slope() {
  std::vector<double> xs, ys;
  bool above = true;
  for (std::int64_t N : {16, 32, 64, 128}) {
    const double c = static_cast<double>(count(3, {0, N}, {0, 1}, {N * N * N, 1}, QMV_COUNT_SPECTRAL));
    xs.push_back(static_cast<double>(N));
    ys.push_back(c);
    above = above && c >= std::pow(static_cast<double>(N), 3);
  }
  const double s = slope(xs, ys);
  return {s >= 2.8 && s <= 3.35 && above,
          "slope " + fmt("%.4f", s) + (above ? ", count >= N^3 at every N" : ", count < N^3 somewhere")};
}

// 4. I(N) grows at most like N^0.5 and stays >= 1
Outcome theorem1_shape() {
  std::vector<double> xs, ys;
  double smallest = INFINITY;
  for (std::int64_t N : {8, 16, 32, 64}) {
    qmv_moment_result m{};
    ok(qmv_integral_I(N, 3, 0, &m));
    xs.push_back(static_cast<double>(N));
    ys.push_back(m.value);
    smallest = std::min(smallest, m.value);
  }
  const double s = slope(xs, ys);
  return {s <= 0.5 && smallest >= 1.0, "slope " + fmt("%.4f", s) + ", min I(N) " + fmt("%.4f", smallest)};
}

// 5. quadrature agrees with the exact moment
Outcome quadrature_consistency() {
  struct Case {
    int p;
    std::int64_t N;
    bool unit_lambda;
  };
  std::vector<Case> cases;
  for (int p : {1, 2}) {
    for (std::int64_t N : {2, 4, 8}) cases.push_back({p, N, true});
    for (std::int64_t N : {4, 8, 16}) cases.push_back({p, N, false});
  }
  double worst_rel = 0;
  int outside = 0;
  for (const auto& c : cases) {
    const double lambda = c.unit_lambda ? 1.0 : 1.0 / (static_cast<double>(c.N) * c.N * c.N);
    const qmv_moment_query q{c.p, {c.N + 1, 2 * c.N}, 0, 1, 0, lambda, nullptr};
    qmv_moment_result e{}, Q{};
    ok(qmv_moment(&q, QMV_MOMENT_EXACT, 0, 0, &e));
    ok(qmv_moment(&q, QMV_MOMENT_QUADRATURE, 0, 0, &Q));
    const double diff = std::fabs(Q.value - e.value);
    worst_rel = std::max(worst_rel, diff / e.value);
    if (diff > Q.error_estimate) ++outside;
  }
  return {outside == 0 && worst_rel <= 0.01,
          std::to_string(cases.size()) + " cases, max relative gap " + fmt("%.2e", worst_rel) + ", " +
              std::to_string(outside) + " outside the error estimate"};
}

// 6. B-transform residual inside the envelope and stable under doubling
Outcome btransform_residual() {
  constexpr double kConstant = 10.0;
  bool envelope_ok = true, growth_ok = true;
  double worst_ratio = 0, worst_growth = 0;
  std::ostringstream growth;
  for (double a : {0.1, 0.3}) {
    double prev = 0;
    for (std::int64_t N : {256, 512, 1024}) {
      const qmv_smooth_phase ph{a, 0.0, N, 2.0};
      qmv_btransform b{};
      ok(qmv_b_transform_residual(&ph, QMV_NORM_SQRT, 0, &b));
      const double env = qmv_b_transform_envelope(N, 1.5 * a, kConstant);
      worst_ratio = std::max(worst_ratio, b.residual / env);
      envelope_ok = envelope_ok && b.residual <= env;
      if (prev > 0) {
        const double g = b.residual / prev;
        worst_growth = std::max(worst_growth, g);
        if (g > 2.0) {
          growth_ok = false;
          growth << " alpha=" << a << " N=" << N / 2 << "->" << N << " x" << fmt("%.2f", g);
        }
      }
      prev = b.residual;
    }
  }
  std::string detail = "max residual/envelope " + fmt("%.3f", worst_ratio) + ", max doubling growth " +
                       fmt("%.2f", worst_growth);
  if (!growth_ok) detail += " (over 2:" + growth.str() + ")";
  return {envelope_ok && growth_ok, detail};
}

// 7. remainder of the degree-6 expansion scales like gamma^3
Outcome expansion_scaling() {
  const double a = 0.25;
  const std::int64_t N = 200;
  const double g = a / (96.0 * N * N) / 4;
  auto d1 = [&](double gg, double x) { return 2 * a * x + 4 * gg * x * x * x; };
  const double lo = std::max(d1(g, N), d1(g / 2, N));
  const double hi = std::min(d1(g, 2.0 * N), d1(g / 2, 2.0 * N));
  auto r = [&](double gg) {
    const qmv_smooth_phase ph{a, gg, N, 2.0};
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double y = lo + (hi - lo) * i / 99.0;
      double t = 0, e = 0;
      ok(qmv_transform_value(&ph, y, &t));
      ok(qmv_expansion_value(a, gg, y, &e));
      worst = std::max(worst, std::fabs(t - e));
    }
    return worst;
  };
  const double ratio = r(g / 2) / r(g);
  return {ratio >= 1.0 / 16 && ratio <= 1.0 / 4, "r(gamma/2)/r(gamma) = " + fmt("%.5f", ratio)};
}

// 8. explicit near-integer bounds hold on random instances
Outcome lemma7_bounds() {
  constexpr std::int64_t kScale = std::int64_t{1} << 53;
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<std::int64_t> an(0, kScale), dn(1, kScale / 5), hd(1, 10000);
  int violations = 0, with_b2 = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t a = an(rng), d = dn(rng), H = hd(rng);
    const double alpha = std::ldexp(static_cast<double>(a), -53), delta = std::ldexp(static_cast<double>(d), -53);
    qmv_rational_approx r{};
    ok(qmv_best_rational(alpha, H, &r));
    std::int64_t B = 0;
    ok(qmv_near_integer_count_exact({a, kScale}, H, {d, kScale}, &B));
    double b1 = 0, b2 = 0;
    int has2 = 0;
    ok(qmv_heathbrown_bounds(&r, H, delta, &b1, &b2, &has2));
    with_b2 += has2;
    if (static_cast<double>(B) > b1 || (has2 && static_cast<double>(B) > b2)) ++violations;
  }
  return {violations == 0, "1000 samples (" + std::to_string(with_b2) + " with theta != 0), " +
                               std::to_string(violations) + " violations"};
}

// 9. n^4 coefficient after k-4 symmetric differences
Outcome coefficient_identity() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<std::int64_t> hd(1, 12), sign(0, 1), num(-50, 50), den(1, 40);
  int checked = 0, wrong = 0;
  for (int k : {8, 9, 10}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int r = k - 4;
      std::vector<std::int64_t> h;
      mpz_class prod = 1;
      for (int i = 0; i < r; ++i) {
        h.push_back(sign(rng) ? hd(rng) : -hd(rng));
        prod *= h.back();
      }
      const qmv_rational alpha{num(rng), den(rng)};
      qmv_poly* poly = nullptr;
      ok(qmv_symmetric_differences(k, r, h.data(), alpha, &poly));
      std::string text(qmv_poly_coefficient(poly, 4, nullptr, 0), '\0');
      qmv_poly_coefficient(poly, 4, text.data(), text.size() + 1);
      qmv_poly_free(poly);
      mpz_class fact_ratio = 1;
      for (int i = 5; i <= k; ++i) fact_ratio *= i;
      mpq_class want(mpz_class(1) << r);
      want *= fact_ratio * prod;
      mpq_class a(mpz_class(alpha.num), mpz_class(alpha.den));
      a.canonicalize();
      want *= a;
      mpq_class got(text);
      got.canonicalize();
      ++checked;
      if (got != want) ++wrong;
    }
  }
  return {wrong == 0, std::to_string(checked) + " tuples, " + std::to_string(wrong) + " mismatches"};
}

// 10. Fejer kernel facts
Outcome fejer_facts() {
  bool hat = qmv_fejer_hat(0.0) == 1.0 && qmv_fejer_hat(1.0) == 0.0 && qmv_fejer_hat(-1.0) == 0.0;
  int sandwich_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const double y = -0.5 + i / 9999.0;
    if (1.0 > M_PI * M_PI / 4.0 * qmv_fejer_kernel(y) * (1 + 1e-15)) ++sandwich_fail;
  }
  int weighted_fail = 0;
  for (int p = 1; p <= 3; ++p) {
    for (std::int64_t len : {4, 6, 9}) {
      const qmv_box box{p, {len + 1, 2 * len}, {0, 1}, {0, 1}};
      double w = 0;
      ok(qmv_fejer_weighted_count(&box, 1.0, 1.0, 0, &w));
      const double c = static_cast<double>(count(p, box.range, {0, 1}, {0, 1}, QMV_COUNT_SPECTRAL));
      if (std::fabs(w - c) > 1e-9 * c) ++weighted_fail;
    }
  }
  return {hat && sandwich_fail == 0 && weighted_fail == 0,
          std::string(hat ? "hat ok" : "hat wrong") + ", sandwich failures " + std::to_string(sandwich_fail) +
              ", weighted-count mismatches " + std::to_string(weighted_fail)};
}

// 11. counts monotone along threshold chains; exponent recurrence closed form
Outcome monotonicity_and_recurrence() {
  int drops = 0;
  for (int p = 1; p <= 3; ++p) {
    const qmv_range r{7, 14};
    std::uint64_t prev = 0;
    for (std::int64_t t = 0; t <= 60; t += 5) {
      const auto c = count(p, r, {t, 3}, {t * t * 20, 7}, QMV_COUNT_SPECTRAL);
      if (c < prev) ++drops;
      prev = c;
    }
  }
  double worst = 0;
  for (double b0 : {0.0, 0.5, 1.0, 3.0, 7.5}) {
    for (int n = 0; n <= 20; ++n) {
      double v = 0;
      ok(qmv_exponent_recurrence(b0, n, &v));
      worst = std::max(worst, std::fabs(v - b0 / (1 + n * b0)));
    }
  }
  double example = 0;
  ok(qmv_exponent_recurrence(3, 4, &example));
  const bool ex_ok = std::fabs(example - 3.0 / 13) <= 1e-12;
  return {drops == 0 && worst <= 1e-12 && ex_ok,
          std::to_string(drops) + " drops, recurrence max error " + fmt("%.1e", worst) + ", beta(3,4) = " +
              fmt("%.15f", example)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "parseval identity", 60, parseval},
      {3, "solution-count slope", 180, theorem1_prime_slope},
      {4, "I(N) growth", 120, theorem1_shape},
      {5, "quadrature consistency", 120, quadrature_consistency},
      {6, "b-transform residual", 30, btransform_residual},
      {7, "expansion scaling", 10, expansion_scaling},
      {8, "near-integer bounds", 60, lemma7_bounds},
      {9, "differencing coefficient", 10, coefficient_identity},
      {10, "fejer facts", 10, fejer_facts},
      {11, "monotonicity and recurrence", 5, monotonicity_and_recurrence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s [%2d] %s: %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.time_limit, in_time ? "" : " TIME EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
