// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface over the C++ core. Exceptions never cross this file:
// each entry point runs its body through `guarded`, which maps the core's
// exception types onto qmv_status codes.

#include "qmv/qmv.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "qmv/diophantine.hpp"
#include "qmv/exp_core.hpp"
#include "qmv/moments.hpp"
#include "qmv/stationary_phase.hpp"
#include "qmv/weyl.hpp"

struct qmv_spectrum {
  qmv::PhaseSpectrum spectrum;
};

struct qmv_poly {
  std::vector<mpq_class> coefficients;
};

namespace {

thread_local std::string last_error;
thread_local double last_budget = 0.0;

template <class F>
qmv_status guarded(F&& body) {
  try {
    body();
    return QMV_OK;
  } catch (const qmv::ResourceError& e) {
    last_error = e.what();
    last_budget = e.required();
    return QMV_ERR_BUDGET;
  } catch (const qmv::ParameterError& e) {
    last_error = e.what();
    return QMV_ERR_PARAM;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QMV_ERR_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QMV_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return QMV_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* ptr, const char* name) {
  if (ptr == nullptr) throw qmv::ParameterError(std::string(name) + " must not be NULL");
}

qmv::IntRange to_range(qmv_range r) { return {r.first, r.last}; }
qmv::Rational to_rational(qmv_rational r) {
  if (r.den <= 0) throw qmv::ParameterError("rational denominators must be positive");
  return {r.num, r.den};
}
qmv_complex to_c(qmv::cplx z) { return {z.real(), z.imag()}; }

qmv::CoefficientSequence coefficients(std::int64_t lo, std::int64_t hi, const qmv_complex* values) {
  if (values == nullptr) return qmv::CoefficientSequence::ones(lo, hi);
  if (hi < lo) throw qmv::ParameterError("coefficient range (lo, hi] requires lo <= hi");
  std::vector<qmv::cplx> v;
  v.reserve(static_cast<std::size_t>(hi - lo));
  for (std::int64_t i = 0; i < hi - lo; ++i) v.emplace_back(values[i].re, values[i].im);
  return qmv::CoefficientSequence(lo, hi, std::move(v));
}

qmv::BoxQuery to_box(const qmv_box* box) {
  require(box, "box");
  return {box->p, to_range(box->range), to_rational(box->t2), to_rational(box->t4)};
}

std::uint64_t or_default(std::uint64_t budget, std::uint64_t fallback) { return budget == 0 ? fallback : budget; }

qmv::MomentQuery to_query(const qmv_moment_query* q) {
  require(q, "query");
  qmv::MomentQuery out;
  out.p = q->p;
  out.range = to_range(q->range);
  out.alpha0 = q->alpha0;
  out.alpha1 = q->alpha1;
  out.gamma0 = q->gamma0;
  out.gamma1 = q->gamma1;
  if (q->coeffs != nullptr) out.coeffs = coefficients(q->range.first - 1, q->range.last, q->coeffs);
  return out;
}

qmv_moment_result to_c(const qmv::MomentResult& r) {
  qmv_moment_result out{};
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  out.imag_residue = r.imag_residue;
  switch (r.method) {
    case qmv::MomentMethod::exact_orthogonality: out.method = QMV_MOMENT_EXACT; break;
    case qmv::MomentMethod::semianalytic: out.method = QMV_MOMENT_SEMIANALYTIC; break;
    case qmv::MomentMethod::quadrature: out.method = QMV_MOMENT_QUADRATURE; break;
  }
  return out;
}

qmv::SmoothPhase to_phase(const qmv_smooth_phase* p) {
  require(p, "phase");
  return qmv::SmoothPhase(p->alpha, p->gamma, p->N, p->A == 0.0 ? 2.0 : p->A);
}

mpq_class to_mpq(qmv_rational r) {
  if (r.den <= 0) throw qmv::ParameterError("rational denominators must be positive");
  mpq_class q(mpz_class(r.num), mpz_class(r.den));
  q.canonicalize();
  return q;
}

}  // namespace

extern "C" {

const char* qmv_version(void) { return "1.0.0"; }
const char* qmv_last_error(void) { return last_error.c_str(); }
double qmv_last_required_budget(void) { return last_budget; }

qmv_status qmv_eval_sum(double alpha, double gamma, int64_t lo, int64_t hi, const qmv_complex* coeffs,
                        int64_t upper, qmv_complex* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(qmv::eval_sum({alpha, gamma}, coefficients(lo, hi, coeffs), upper));
  });
}

qmv_status qmv_max_partial_sum(double alpha, double gamma, int64_t lo, int64_t hi, const qmv_complex* coeffs,
                               qmv_complex* value, int64_t* argmax) {
  return guarded([&] {
    require(value, "value");
    require(argmax, "argmax");
    const auto r = qmv::max_partial_sum({alpha, gamma}, coefficients(lo, hi, coeffs));
    *value = to_c(r.value);
    *argmax = r.argmax;
  });
}

qmv_status qmv_spectrum_build(qmv_range range, int p, uint64_t budget, qmv_spectrum** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto s = qmv::build_spectrum(to_range(range), p, or_default(budget, qmv::kDefaultSpectrumBudget));
    *out = new qmv_spectrum{std::move(s)};
  });
}

void qmv_spectrum_free(qmv_spectrum* spectrum) { delete spectrum; }

size_t qmv_spectrum_size(const qmv_spectrum* spectrum) { return spectrum ? spectrum->spectrum.size() : 0; }

uint64_t qmv_spectrum_total(const qmv_spectrum* spectrum) { return spectrum ? spectrum->spectrum.total() : 0; }

qmv_status qmv_spectrum_entry(const qmv_spectrum* spectrum, size_t index, int64_t* s2, qmv_u128* s4,
                              uint64_t* mult) {
  return guarded([&] {
    require(spectrum, "spectrum");
    if (index >= spectrum->spectrum.size()) throw qmv::ParameterError("spectrum index out of range");
    const auto& e = spectrum->spectrum.entries()[index];
    if (s2) *s2 = e.s2;
    if (s4) {
      const auto v = static_cast<qmv::u128>(e.s4);
      s4->hi = static_cast<uint64_t>(v >> 64);
      s4->lo = static_cast<uint64_t>(v);
    }
    if (mult) *mult = e.mult;
  });
}

qmv_status qmv_count(const qmv_box* box, qmv_count_method method, uint64_t budget, uint64_t* count,
                     double* elapsed_seconds) {
  return guarded([&] {
    require(count, "count");
    const auto q = to_box(box);
    qmv::CountResult r;
    if (method == QMV_COUNT_BRUTEFORCE)
      r = qmv::count_bruteforce(q, or_default(budget, qmv::kDefaultBruteforceBudget));
    else if (method == QMV_COUNT_SPECTRAL)
      r = qmv::count_spectral(q, or_default(budget, qmv::kDefaultSpectrumBudget));
    else
      throw qmv::ParameterError("unknown count method");
    *count = r.count;
    if (elapsed_seconds) *elapsed_seconds = r.elapsed_seconds;
  });
}

double qmv_fejer_hat(double t) { return qmv::fejer_hat(t); }
double qmv_fejer_kernel(double y) { return qmv::fejer_kernel(y); }

qmv_status qmv_fejer_weighted_count(const qmv_box* box, double delta, double lambda, uint64_t budget,
                                    double* out) {
  return guarded([&] {
    require(out, "out");
    require(box, "box");
    qmv::BoxQuery q{box->p, to_range(box->range), {0, 1}, {0, 1}};
    *out = qmv::fejer_weighted_count(q, delta, lambda, or_default(budget, qmv::kDefaultSpectrumBudget));
  });
}

qmv_status qmv_lemma2_product_gap(int64_t N, uint64_t budget, double* max_ratio, uint64_t* solutions) {
  return guarded([&] {
    require(max_ratio, "max_ratio");
    const auto g = qmv::lemma2_product_gap(N, or_default(budget, qmv::kDefaultSpectrumBudget));
    *max_ratio = g.max_ratio;
    if (solutions) *solutions = g.solutions;
  });
}

qmv_status qmv_gamma_kernel(double lambda0, double lambda1, int64_t d, qmv_complex* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(qmv::gamma_kernel(lambda0, lambda1, d));
  });
}

qmv_status qmv_moment(const qmv_moment_query* query, qmv_moment_method method, double safety, uint64_t budget,
                      qmv_moment_result* out) {
  return guarded([&] {
    require(out, "out");
    const auto q = to_query(query);
    switch (method) {
      case QMV_MOMENT_EXACT:
        *out = to_c(qmv::moment_exact(q, or_default(budget, qmv::kDefaultSpectrumBudget)));
        break;
      case QMV_MOMENT_SEMIANALYTIC:
        *out = to_c(qmv::moment_semianalytic(q, or_default(budget, qmv::kDefaultSpectrumBudget)));
        break;
      case QMV_MOMENT_QUADRATURE:
        *out = to_c(qmv::moment_quadrature(q, safety > 0.0 ? safety : qmv::kDefaultQuadratureSafety,
                                           or_default(budget, qmv::kDefaultGridBudget)));
        break;
      default: throw qmv::ParameterError("unknown moment method");
    }
  });
}

qmv_status qmv_integral_I(int64_t N, int p, uint64_t budget, qmv_moment_result* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(qmv::integral_I(N, p, or_default(budget, qmv::kDefaultSpectrumBudget)));
  });
}

qmv_status qmv_integral_R(double Delta, int64_t N, int p, qmv_moment_method method, uint64_t budget,
                          qmv_moment_result* out, double* lemma5_ratio) {
  return guarded([&] {
    require(out, "out");
    qmv::RMethod m;
    if (method == QMV_MOMENT_SEMIANALYTIC)
      m = qmv::RMethod::semianalytic;
    else if (method == QMV_MOMENT_QUADRATURE)
      m = qmv::RMethod::quadrature;
    else
      throw qmv::ParameterError("R(Delta, N) supports the semianalytic and quadrature methods");
    const auto r = qmv::integral_R(Delta, N, p, m, or_default(budget, qmv::kDefaultSpectrumBudget));
    *out = to_c(r.r);
    if (lemma5_ratio) *lemma5_ratio = r.lemma5_ratio;
  });
}

qmv_status qmv_lemma3_check(int64_t N, uint64_t budget, double* value, double* log_power) {
  return guarded([&] {
    require(value, "value");
    const auto c = qmv::lemma3_check(N, or_default(budget, qmv::kDefaultSpectrumBudget));
    *value = c.value;
    if (log_power) *log_power = c.log_power;
  });
}

qmv_status qmv_exponent_recurrence(double beta0, int n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmv::exponent_recurrence(beta0, n);
  });
}

qmv_status qmv_fit_exponent(const double* scales, const double* values, size_t count, double* slope,
                            double* intercept, double* residual) {
  return guarded([&] {
    require(slope, "slope");
    if (count > 0) {
      require(scales, "scales");
      require(values, "values");
    }
    std::vector<std::pair<double, double>> samples;
    for (size_t i = 0; i < count; ++i) samples.emplace_back(scales[i], values[i]);
    const auto fit = qmv::fit_exponent(samples);
    *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
    if (residual) *residual = fit.residual;
  });
}

int qmv_validate_domain(double alpha, double gamma, int64_t N) { return qmv::validate_domain(alpha, gamma, N) ? 1 : 0; }

qmv_status qmv_invert_derivative(const qmv_smooth_phase* phase, double y, double* z) {
  return guarded([&] {
    require(z, "z");
    *z = qmv::invert_derivative(to_phase(phase), y);
  });
}

qmv_status qmv_transform_value(const qmv_smooth_phase* phase, double y, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmv::transform_value(to_phase(phase), y);
  });
}

qmv_status qmv_expansion_value(double alpha, double gamma, double y, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmv::expansion_value(alpha, gamma, y);
  });
}

qmv_status qmv_b_transform_residual(const qmv_smooth_phase* phase, qmv_normalization norm, int drop_endpoints,
                                    qmv_btransform* out) {
  return guarded([&] {
    require(out, "out");
    qmv::BTransformOptions opt;
    if (norm == QMV_NORM_SQRT)
      opt.normalization = qmv::Normalization::sqrt_second_derivative;
    else if (norm == QMV_NORM_LINEAR)
      opt.normalization = qmv::Normalization::second_derivative;
    else
      throw qmv::ParameterError("unknown normalization");
    opt.drop_endpoints = drop_endpoints != 0;
    const auto r = qmv::b_transform_residual(to_phase(phase), opt);
    *out = {to_c(r.lhs), to_c(r.rhs), r.residual, r.lambda2, r.nu_first, r.nu_last};
  });
}

double qmv_b_transform_envelope(int64_t N, double lambda2, double constant) {
  return qmv::b_transform_envelope(N, lambda2, constant);
}

qmv_status qmv_weyl_sum(int k, int64_t N, double alpha, qmv_complex* out, int* precision_warning) {
  return guarded([&] {
    require(out, "out");
    const auto s = qmv::weyl_sum(k, N, alpha);
    *out = to_c(s.value);
    if (precision_warning) *precision_warning = s.precision_warning ? 1 : 0;
  });
}

qmv_status qmv_weyl_sum_rational(int k, int64_t N, int64_t a, int64_t q, qmv_complex* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(qmv::weyl_sum_rational(k, N, a, q).value);
  });
}

qmv_status qmv_near_integer_count(double alpha, int64_t H, double delta, int64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmv::near_integer_count(alpha, H, delta);
  });
}

qmv_status qmv_near_integer_count_exact(qmv_rational alpha, int64_t H, qmv_rational delta, int64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = qmv::near_integer_count_exact(to_mpq(alpha), H, to_mpq(delta));
  });
}

qmv_status qmv_best_rational(double alpha, int64_t Q, qmv_rational_approx* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = qmv::best_rational(alpha, Q);
    *out = {r.a, r.q, r.theta};
  });
}

qmv_status qmv_heathbrown_bounds(const qmv_rational_approx* approx, int64_t H, double delta, double* bound1,
                                 double* bound2, int* has_bound2) {
  return guarded([&] {
    require(approx, "approx");
    require(bound1, "bound1");
    const auto b = qmv::heathbrown_bounds({approx->a, approx->q, approx->theta}, H, delta);
    *bound1 = b.bound1;
    if (has_bound2) *has_bound2 = b.bound2 ? 1 : 0;
    if (bound2) *bound2 = b.bound2.value_or(0.0);
  });
}

qmv_status qmv_symmetric_differences(int k, int r, const int64_t* h, qmv_rational alpha, qmv_poly** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (r > 0) require(h, "h");
    std::vector<std::int64_t> shifts(h, h + (r > 0 ? r : 0));
    auto poly = qmv::symmetric_differences(k, r, shifts, to_mpq(alpha));
    *out = new qmv_poly{std::move(poly)};
  });
}

void qmv_poly_free(qmv_poly* poly) { delete poly; }

size_t qmv_poly_size(const qmv_poly* poly) { return poly ? poly->coefficients.size() : 0; }

size_t qmv_poly_coefficient(const qmv_poly* poly, size_t power, char* buf, size_t buflen) {
  if (poly == nullptr || power >= poly->coefficients.size()) return 0;
  const std::string s = poly->coefficients[power].get_str();
  if (buf != nullptr && buflen > 0) {
    const size_t n = s.size() < buflen - 1 ? s.size() : buflen - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

qmv_status qmv_theorem4_report(int k, int64_t N, double alpha, double epsilon, qmv_theorem4* out) {
  return guarded([&] {
    require(out, "out");
    const auto t = qmv::theorem4_report(k, N, alpha, epsilon < 0.0 ? qmv::kDefaultEpsilon : epsilon);
    *out = {t.k, t.N, t.alpha, t.epsilon, t.H, t.delta, t.K, t.exponent_main, t.exponent_secondary, t.B,
            t.lhs, t.rhs, t.ratio, t.precision_warning ? 1 : 0, {t.approx.a, t.approx.q, t.approx.theta},
            t.corollary_q_window ? 1 : 0, t.corollary_theta_window ? 1 : 0, t.probabilistic_B,
            t.probabilistic_rhs};
  });
}

qmv_status qmv_sieve_pair_count(const double* a_values, const double* b_values, size_t H, int64_t N,
                                uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    require(a_values, "a_values");
    require(b_values, "b_values");
    *out = qmv::sieve_pair_count({a_values, H}, {b_values, H}, N);
  });
}

}  // extern "C"
