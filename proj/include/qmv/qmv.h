/* SPDX-License-Identifier: Apache-2.0 */

/*
 * C interface to the quartic mean-value library.
 *
 * Every fallible entry point returns a qmv_status. On failure the message is
 * available from qmv_last_error() and, for QMV_ERR_BUDGET, the budget the
 * request would have needed from qmv_last_required_budget(). Both are
 * thread-local and describe the most recent failing call on that thread.
 *
 * Objects with internal state (spectra, difference polynomials) are opaque
 * handles released with their matching *_free function.
 */

#ifndef QMV_QMV_H
#define QMV_QMV_H

#include <stddef.h>
#include <stdint.h>

#if defined(QMV_BUILDING_LIBRARY)
#define QMV_API __attribute__((visibility("default")))
#else
#define QMV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmv_status {
  QMV_OK = 0,
  QMV_ERR_PARAM = 1,    /* invalid argument */
  QMV_ERR_BUDGET = 2,   /* enumeration or grid budget exceeded */
  QMV_ERR_INTERNAL = 3  /* should not happen */
} qmv_status;

QMV_API const char* qmv_version(void);
QMV_API const char* qmv_last_error(void);
QMV_API double qmv_last_required_budget(void);

typedef struct qmv_complex {
  double re;
  double im;
} qmv_complex;

/* Closed integer interval [first, last]; (N, 2N] is {N + 1, 2N}. */
typedef struct qmv_range {
  int64_t first;
  int64_t last;
} qmv_range;

typedef struct qmv_rational {
  int64_t num;
  int64_t den; /* > 0 */
} qmv_rational;

/* 128-bit unsigned value split into halves. */
typedef struct qmv_u128 {
  uint64_t hi;
  uint64_t lo;
} qmv_u128;

/* ---- exponential sums and the (s2, s4) spectrum ------------------------ */

/* sum_{lo < n <= upper} a_n e(alpha n^2 + gamma n^4). coeffs holds hi - lo
 * values for n = lo + 1 .. hi, or NULL for all ones. */
QMV_API qmv_status qmv_eval_sum(double alpha, double gamma, int64_t lo, int64_t hi,
                                const qmv_complex* coeffs, int64_t upper, qmv_complex* out);

/* Partial sum of maximal modulus over upper limits in (lo, hi]; smallest
 * maximizer on ties. */
QMV_API qmv_status qmv_max_partial_sum(double alpha, double gamma, int64_t lo, int64_t hi,
                                       const qmv_complex* coeffs, qmv_complex* value,
                                       int64_t* argmax);

typedef struct qmv_spectrum qmv_spectrum;

/* budget caps range-length^p; pass 0 for the library default. */
QMV_API qmv_status qmv_spectrum_build(qmv_range range, int p, uint64_t budget, qmv_spectrum** out);
QMV_API void qmv_spectrum_free(qmv_spectrum* spectrum);
QMV_API size_t qmv_spectrum_size(const qmv_spectrum* spectrum);
QMV_API uint64_t qmv_spectrum_total(const qmv_spectrum* spectrum);
/* Entries are sorted by (s2, s4). */
QMV_API qmv_status qmv_spectrum_entry(const qmv_spectrum* spectrum, size_t index, int64_t* s2,
                                      qmv_u128* s4, uint64_t* mult);

/* ---- Diophantine counts ------------------------------------------------- */

typedef struct qmv_box {
  int p;
  qmv_range range;
  qmv_rational t2; /* |s2(n) - s2(m)| <= t2 */
  qmv_rational t4; /* |s4(n) - s4(m)| <= t4 */
} qmv_box;

typedef enum qmv_count_method { QMV_COUNT_BRUTEFORCE = 0, QMV_COUNT_SPECTRAL = 1 } qmv_count_method;

QMV_API qmv_status qmv_count(const qmv_box* box, qmv_count_method method, uint64_t budget,
                             uint64_t* count, double* elapsed_seconds);

QMV_API double qmv_fejer_hat(double t);
QMV_API double qmv_fejer_kernel(double y);

/* Only box->p and box->range are used. */
QMV_API qmv_status qmv_fejer_weighted_count(const qmv_box* box, double delta, double lambda,
                                            uint64_t budget, double* out);

QMV_API qmv_status qmv_lemma2_product_gap(int64_t N, uint64_t budget, double* max_ratio,
                                          uint64_t* solutions);

/* ---- mean values --------------------------------------------------------- */

typedef enum qmv_moment_method {
  QMV_MOMENT_EXACT = 0,
  QMV_MOMENT_SEMIANALYTIC = 1,
  QMV_MOMENT_QUADRATURE = 2
} qmv_moment_method;

typedef struct qmv_moment_query {
  int p;
  qmv_range range;
  double alpha0, alpha1;
  double gamma0, gamma1;
  const qmv_complex* coeffs; /* range.last - range.first + 1 values, or NULL */
} qmv_moment_query;

typedef struct qmv_moment_result {
  double value;
  double error_estimate;
  double imag_residue;
  qmv_moment_method method;
} qmv_moment_result;

QMV_API qmv_status qmv_gamma_kernel(double lambda0, double lambda1, int64_t d, qmv_complex* out);

/* For QMV_MOMENT_QUADRATURE, `safety` <= 0 selects the default; `budget`
 * caps the grid. Otherwise `budget` caps the spectrum and safety is unused. */
QMV_API qmv_status qmv_moment(const qmv_moment_query* query, qmv_moment_method method, double safety,
                              uint64_t budget, qmv_moment_result* out);

QMV_API qmv_status qmv_integral_I(int64_t N, int p, uint64_t budget, qmv_moment_result* out);

QMV_API qmv_status qmv_integral_R(double Delta, int64_t N, int p, qmv_moment_method method,
                                  uint64_t budget, qmv_moment_result* out, double* lemma5_ratio);

QMV_API qmv_status qmv_lemma3_check(int64_t N, uint64_t budget, double* value, double* log_power);

QMV_API qmv_status qmv_exponent_recurrence(double beta0, int n, double* out);

QMV_API qmv_status qmv_fit_exponent(const double* scales, const double* values, size_t count,
                                    double* slope, double* intercept, double* residual);

/* ---- B-transform --------------------------------------------------------- */

typedef struct qmv_smooth_phase {
  double alpha;
  double gamma;
  int64_t N;
  double A; /* 1 < A <= 2; 0 selects 2 */
} qmv_smooth_phase;

typedef enum qmv_normalization {
  QMV_NORM_SQRT = 0,  /* 1 / sqrt(g''(z(nu))) */
  QMV_NORM_LINEAR = 1 /* 1 / g''(z(nu)) */
} qmv_normalization;

typedef struct qmv_btransform {
  qmv_complex lhs;
  qmv_complex rhs;
  double residual;
  double lambda2;
  int64_t nu_first;
  int64_t nu_last;
} qmv_btransform;

QMV_API int qmv_validate_domain(double alpha, double gamma, int64_t N);
QMV_API qmv_status qmv_invert_derivative(const qmv_smooth_phase* phase, double y, double* z);
QMV_API qmv_status qmv_transform_value(const qmv_smooth_phase* phase, double y, double* out);
QMV_API qmv_status qmv_expansion_value(double alpha, double gamma, double y, double* out);
QMV_API qmv_status qmv_b_transform_residual(const qmv_smooth_phase* phase, qmv_normalization norm,
                                            int drop_endpoints, qmv_btransform* out);
/* constant * (log(2 + N lambda2) + lambda2^{-1/2}) */
QMV_API double qmv_b_transform_envelope(int64_t N, double lambda2, double constant);

/* ---- Weyl sums and rational approximation -------------------------------- */

QMV_API qmv_status qmv_weyl_sum(int k, int64_t N, double alpha, qmv_complex* out, int* precision_warning);
QMV_API qmv_status qmv_weyl_sum_rational(int k, int64_t N, int64_t a, int64_t q, qmv_complex* out);

/* Direct loop over h = 1..H. */
QMV_API qmv_status qmv_near_integer_count(double alpha, int64_t H, double delta, int64_t* out);
/* Exact count for alpha = a/q and delta = num/den, any H. */
QMV_API qmv_status qmv_near_integer_count_exact(qmv_rational alpha, int64_t H, qmv_rational delta,
                                                int64_t* out);

typedef struct qmv_rational_approx {
  int64_t a;
  int64_t q;
  double theta;
} qmv_rational_approx;

QMV_API qmv_status qmv_best_rational(double alpha, int64_t Q, qmv_rational_approx* out);
QMV_API qmv_status qmv_heathbrown_bounds(const qmv_rational_approx* approx, int64_t H, double delta,
                                         double* bound1, double* bound2, int* has_bound2);

typedef struct qmv_poly qmv_poly;

QMV_API qmv_status qmv_symmetric_differences(int k, int r, const int64_t* h, qmv_rational alpha,
                                             qmv_poly** out);
QMV_API void qmv_poly_free(qmv_poly* poly);
QMV_API size_t qmv_poly_size(const qmv_poly* poly); /* degree + 1 */
/* Writes coefficient `power` as "num/den" (or an integer). Returns the
 * length needed, excluding the terminator; the output is truncated to buflen. */
QMV_API size_t qmv_poly_coefficient(const qmv_poly* poly, size_t power, char* buf, size_t buflen);

typedef struct qmv_theorem4 {
  int k;
  int64_t N;
  double alpha;
  double epsilon;
  int64_t H;
  double delta;
  double K;
  double exponent_main;
  double exponent_secondary;
  int64_t B;
  double lhs;
  double rhs;
  double ratio;
  int precision_warning;
  qmv_rational_approx approx;
  int corollary_q_window;
  int corollary_theta_window;
  double probabilistic_B;
  double probabilistic_rhs;
} qmv_theorem4;

/* epsilon < 0 selects the default. */
QMV_API qmv_status qmv_theorem4_report(int k, int64_t N, double alpha, double epsilon, qmv_theorem4* out);

QMV_API qmv_status qmv_sieve_pair_count(const double* a_values, const double* b_values, size_t H,
                                        int64_t N, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* QMV_QMV_H */
