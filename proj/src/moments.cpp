// SPDX-License-Identifier: Apache-2.0

#include "qmv/moments.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "qmv/phase.hpp"

namespace qmv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_common(const MomentQuery& q) {
  if (q.p < 1 || q.p > 5) throw ParameterError("p must lie in 1..5");
  if (q.range.empty()) throw ParameterError("moment range is empty");
  for (double v : {q.alpha0, q.alpha1, q.gamma0, q.gamma1})
    if (!std::isfinite(v)) throw ParameterError("integration bounds must be finite");
  if (q.alpha1 < q.alpha0 || q.gamma1 < q.gamma0)
    throw ParameterError("integration intervals must satisfy lower <= upper");
  if (q.coeffs && (q.coeffs->lo() != q.range.first - 1 || q.coeffs->hi() != q.range.last))
    throw ParameterError("coefficient sequence must cover exactly the moment range");
}

bool unit_coefficients(const MomentQuery& q) { return !q.coeffs || q.coeffs->all_ones(); }

// Positive whole number of periods, or 0 if the length is not integral.
std::int64_t whole_periods(double len) {
  if (len < 1.0 || len != std::floor(len) || len > 1e6) return 0;
  return static_cast<std::int64_t>(len);
}

}  // namespace

cplx gamma_kernel(double lambda0, double lambda1, i128 d) {
  if (lambda1 < lambda0) throw ParameterError("gamma_kernel needs lambda0 <= lambda1");
  const double width = lambda1 - lambda0;
  if (d == 0) return {width, 0.0};
  // (e(l1 d) - e(l0 d)) / (2 pi i d) = e(mid d) sin(pi width d) / (pi d)
  const double mid = 0.5 * (lambda0 + lambda1);
  const double t = frac_product(0.5 * width, d);
  const double s = std::sin(kTwoPi * (t - std::nearbyint(t)));
  const double amp = s / (std::numbers::pi * static_cast<double>(d));
  return amp * unit(frac_product(mid, d));
}

MomentResult moment_exact(const MomentQuery& q, std::uint64_t budget) {
  validate_common(q);
  const std::int64_t periods = whole_periods(q.alpha1 - q.alpha0);
  if (periods == 0) throw ParameterError("moment_exact needs alpha to range over whole periods");
  if (!unit_coefficients(q)) throw ParameterError("moment_exact supports unit coefficients only");

  const PhaseSpectrum spectrum = build_spectrum(q.range, q.p, budget);
  const auto entries = spectrum.entries();
  CompensatedSum acc;
  double magnitude = 0.0;
  for (std::size_t begin = 0; begin < entries.size();) {
    std::size_t end = begin;
    while (end < entries.size() && entries[end].s2 == entries[begin].s2) ++end;
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = begin; b < end; ++b) {
        const double w = static_cast<double>(entries[a].mult) * static_cast<double>(entries[b].mult);
        const cplx term = w * gamma_kernel(q.gamma0, q.gamma1, entries[a].s4 - entries[b].s4);
        acc += term;
        magnitude += std::abs(term);
      }
    }
    begin = end;
  }
  const cplx total = acc.value() * static_cast<double>(periods);
  MomentResult r;
  r.method = MomentMethod::exact_orthogonality;
  r.value = std::max(0.0, total.real());
  r.imag_residue = std::fabs(total.imag());
  r.error_estimate = 64.0 * DBL_EPSILON * magnitude * static_cast<double>(periods);
  return r;
}

MomentResult moment_semianalytic(const MomentQuery& q, std::uint64_t budget, std::uint64_t pair_budget) {
  validate_common(q);
  if (!unit_coefficients(q)) throw ParameterError("moment_semianalytic supports unit coefficients only");
  MomentResult r;
  r.method = MomentMethod::semianalytic;
  if (q.alpha1 == q.alpha0 || q.gamma1 == q.gamma0) return r;

  const PhaseSpectrum spectrum = build_spectrum(q.range, q.p, budget);
  const auto entries = spectrum.entries();
  const double pairs = static_cast<double>(entries.size()) * static_cast<double>(entries.size());
  if (pairs > static_cast<double>(pair_budget))
    throw ResourceError("semianalytic moment needs " + format_count(pairs) +
                            " key pairs, budget is " + std::to_string(pair_budget),
                        pairs);

  // The alpha kernel depends only on ds2, which spans a short integer range.
  const std::int64_t s2_min = entries.front().s2;
  const std::int64_t s2_span = entries.back().s2 - s2_min;
  std::vector<cplx> alpha_kernel(static_cast<std::size_t>(2 * s2_span + 1));
  for (std::int64_t d = -s2_span; d <= s2_span; ++d)
    alpha_kernel[static_cast<std::size_t>(d + s2_span)] = gamma_kernel(q.alpha0, q.alpha1, d);

  CompensatedSum acc;
  double magnitude = 0.0;
  for (const auto& a : entries) {
    for (const auto& b : entries) {
      const cplx ka = alpha_kernel[static_cast<std::size_t>(a.s2 - b.s2 + s2_span)];
      const double w = static_cast<double>(a.mult) * static_cast<double>(b.mult);
      const cplx term = w * ka * gamma_kernel(q.gamma0, q.gamma1, a.s4 - b.s4);
      acc += term;
      magnitude += std::abs(term);
    }
  }
  const cplx total = acc.value();
  r.value = std::max(0.0, total.real());
  r.imag_residue = std::fabs(total.imag());
  r.error_estimate = 64.0 * DBL_EPSILON * magnitude;
  return r;
}

namespace {

struct Support {
  std::vector<std::int64_t> n;
  std::vector<cplx> a;
};

Support coefficient_support(const MomentQuery& q) {
  Support s;
  for (std::int64_t n = q.range.first; n <= q.range.last; ++n) {
    const cplx a = q.coeffs ? q.coeffs->at(n) : cplx{1.0, 0.0};
    if (a == cplx{}) continue;
    s.n.push_back(n);
    s.a.push_back(a);
  }
  return s;
}

struct AxisPlan {
  std::uint64_t nodes = 0;
  bool periodic = false;
};

AxisPlan plan_axis(double len, double bandwidth, double max_rate, double safety) {
  AxisPlan plan;
  if (len == 0.0) return plan;
  if (const std::int64_t periods = whole_periods(len); periods > 0) {
    // Integer frequencies below nodes/len are integrated exactly.
    plan.periodic = true;
    plan.nodes = static_cast<std::uint64_t>(bandwidth * static_cast<double>(periods)) + 1;
    return plan;
  }
  const double h = safety / max_rate;
  plan.nodes = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len / h)));
  return plan;
}

struct Frequencies {
  double alpha_bandwidth = 0.0, gamma_bandwidth = 0.0;
  double alpha_rate = 0.0, gamma_rate = 0.0;
};

Frequencies frequencies(const MomentQuery& q, const Support& s) {
  Frequencies f;
  if (s.n.empty()) return f;
  i128 min2 = -1, max2 = 0;
  for (std::int64_t n : s.n) {
    const i128 n2 = static_cast<i128>(n) * n;
    if (min2 < 0 || n2 < min2) min2 = n2;
    max2 = std::max(max2, n2);
  }
  const double p = q.p;
  f.alpha_bandwidth = p * static_cast<double>(max2 - min2);
  f.gamma_bandwidth = p * static_cast<double>(max2 * max2 - min2 * min2);
  const double nmax = static_cast<double>(q.range.max_abs());
  f.alpha_rate = kTwoPi * nmax * nmax * 2.0 * p;
  f.gamma_rate = kTwoPi * nmax * nmax * nmax * nmax * 2.0 * p;
  return f;
}

double pow_p(double norm2, int p) {
  double out = 1.0;
  for (int i = 0; i < p; ++i) out *= norm2;
  return out;
}

// Midpoint rule with the given node counts. The axis with fewer nodes is
// tabulated; the other is the outer loop.
double midpoint_rule(const MomentQuery& q, const Support& s, std::uint64_t alpha_nodes,
                     std::uint64_t gamma_nodes) {
  const double ha = (q.alpha1 - q.alpha0) / static_cast<double>(alpha_nodes);
  const double hg = (q.gamma1 - q.gamma0) / static_cast<double>(gamma_nodes);
  const bool table_alpha = alpha_nodes <= gamma_nodes;
  const std::uint64_t inner = table_alpha ? alpha_nodes : gamma_nodes;
  const std::uint64_t outer = table_alpha ? gamma_nodes : alpha_nodes;
  const double inner_start = table_alpha ? q.alpha0 : q.gamma0;
  const double inner_step = table_alpha ? ha : hg;
  const double outer_start = table_alpha ? q.gamma0 : q.alpha0;
  const double outer_step = table_alpha ? hg : ha;

  const std::size_t terms = s.n.size();
  std::vector<i128> inner_freq(terms), outer_freq(terms);
  for (std::size_t k = 0; k < terms; ++k) {
    const i128 n2 = static_cast<i128>(s.n[k]) * s.n[k];
    inner_freq[k] = table_alpha ? n2 : n2 * n2;
    outer_freq[k] = table_alpha ? n2 * n2 : n2;
  }

  // table[k][i] = a_k e(x_i f_k), stored column-major per term.
  const auto width = static_cast<std::size_t>(inner);
  std::vector<double> tre(terms * width), tim(terms * width);
  for (std::size_t k = 0; k < terms; ++k) {
    for (std::size_t i = 0; i < width; ++i) {
      const double x = inner_start + (static_cast<double>(i) + 0.5) * inner_step;
      const cplx v = s.a[k] * unit(frac_product(x, inner_freq[k]));
      tre[k * width + i] = v.real();
      tim[k * width + i] = v.imag();
    }
  }

  std::vector<double> sre(width), sim(width);
  KahanSum total;
  for (std::uint64_t j = 0; j < outer; ++j) {
    const double y = outer_start + (static_cast<double>(j) + 0.5) * outer_step;
    std::fill(sre.begin(), sre.end(), 0.0);
    std::fill(sim.begin(), sim.end(), 0.0);
    for (std::size_t k = 0; k < terms; ++k) {
      const cplx g = unit(frac_product(y, outer_freq[k]));
      const double gr = g.real(), gi = g.imag();
      const double* ar = &tre[k * width];
      const double* ai = &tim[k * width];
      for (std::size_t i = 0; i < width; ++i) {
        sre[i] += ar[i] * gr - ai[i] * gi;
        sim[i] += ar[i] * gi + ai[i] * gr;
      }
    }
    double row = 0.0;
    for (std::size_t i = 0; i < width; ++i) row += pow_p(sre[i] * sre[i] + sim[i] * sim[i], q.p);
    total.add(row);
  }
  return total.value() * ha * hg;
}

}  // namespace

QuadratureGrid plan_quadrature(const MomentQuery& q, double safety) {
  validate_common(q);
  if (!(safety > 0.0) || !std::isfinite(safety)) throw ParameterError("quadrature safety must be positive");
  const Support s = coefficient_support(q);
  const Frequencies f = frequencies(q, s);
  const AxisPlan pa = plan_axis(q.alpha1 - q.alpha0, f.alpha_bandwidth, f.alpha_rate, safety);
  const AxisPlan pg = plan_axis(q.gamma1 - q.gamma0, f.gamma_bandwidth, f.gamma_rate, safety);
  QuadratureGrid g;
  g.alpha_nodes = pa.nodes;
  g.gamma_nodes = pg.nodes;
  g.alpha_periodic = pa.periodic;
  g.gamma_periodic = pg.periodic;
  const double coarse = static_cast<double>(pa.nodes) * static_cast<double>(pg.nodes);
  const double fine = (pa.periodic ? 1.0 : 2.0) * (pg.periodic ? 1.0 : 2.0) * coarse;
  g.total_evaluations = (pa.periodic && pg.periodic) ? coarse : coarse + fine;
  if (s.n.empty()) g.total_evaluations = 0.0;
  return g;
}

MomentResult moment_quadrature(const MomentQuery& q, double safety, std::uint64_t grid_budget) {
  const QuadratureGrid grid = plan_quadrature(q, safety);
  MomentResult r;
  r.method = MomentMethod::quadrature;
  const Support s = coefficient_support(q);
  if (s.n.empty() || grid.alpha_nodes == 0 || grid.gamma_nodes == 0) return r;
  if (grid.total_evaluations > static_cast<double>(grid_budget))
    throw ResourceError("quadrature needs a " + std::to_string(grid.alpha_nodes) + " x " +
                            std::to_string(grid.gamma_nodes) + " grid (" +
                            format_count(grid.total_evaluations) +
                            " evaluations with halving), budget is " + std::to_string(grid_budget),
                        grid.total_evaluations);

  const double coarse = midpoint_rule(q, s, grid.alpha_nodes, grid.gamma_nodes);
  const double floor = 1e-12 * std::fabs(coarse) + 1e-300;
  if (grid.alpha_periodic && grid.gamma_periodic) {
    r.value = coarse;
    r.error_estimate = floor;
    return r;
  }
  const std::uint64_t na = grid.alpha_periodic ? grid.alpha_nodes : 2 * grid.alpha_nodes;
  const std::uint64_t ng = grid.gamma_periodic ? grid.gamma_nodes : 2 * grid.gamma_nodes;
  const double fine = midpoint_rule(q, s, na, ng);
  r.value = fine;
  r.error_estimate = std::fabs(fine - coarse) + floor;
  return r;
}

MomentResult integral_I_real(double N, int p, std::uint64_t budget) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw ParameterError("I(N) needs N >= 1");
  const double w = 1.0 / (N * N * N);
  MomentQuery q;
  q.p = p;
  q.range = {static_cast<std::int64_t>(std::floor(N)) + 1, static_cast<std::int64_t>(std::floor(2.0 * N))};
  q.alpha0 = 0.0;
  q.alpha1 = 1.0;
  q.gamma0 = -w;
  q.gamma1 = w;
  return moment_exact(q, budget);
}

MomentResult integral_I(std::int64_t N, int p, std::uint64_t budget) {
  if (N < 1) throw ParameterError("I(N) needs N >= 1");
  return integral_I_real(static_cast<double>(N), p, budget);
}

RResult integral_R(double Delta, std::int64_t N, int p, RMethod method, std::uint64_t budget) {
  if (N < 16) throw ParameterError("R(Delta, N) needs N >= 16");
  const double Nd = static_cast<double>(N);
  if (!(Delta >= 1.0 / std::sqrt(Nd) && Delta <= 0.25))
    throw ParameterError("R(Delta, N) needs N^{-1/2} <= Delta <= 1/4");
  const double w = 1.0 / (Nd * Nd * Nd);
  MomentQuery q;
  q.p = p;
  q.range = IntRange::open_closed(N, 2 * N);
  q.alpha0 = Delta;
  q.alpha1 = 2.0 * Delta;
  q.gamma0 = -w;
  q.gamma1 = w;
  RResult out;
  out.r = method == RMethod::semianalytic ? moment_semianalytic(q, budget) : moment_quadrature(q);
  out.i_2dn = integral_I_real(2.0 * Delta * Nd, p, budget).value;
  out.i_4dn = integral_I_real(4.0 * Delta * Nd, p, budget).value;
  const double logN = std::log(Nd);
  out.lemma5_ratio = out.r.value / (Delta * std::pow(logN, 6) * (out.i_2dn + out.i_4dn));
  return out;
}

Lemma3Check lemma3_check(std::int64_t N, std::uint64_t budget) {
  if (N < 2) throw ParameterError("Lemma 3 check needs N >= 2");
  const double Nd = static_cast<double>(N);
  const double w = 1.0 / (Nd * Nd * Nd);
  MomentQuery q;
  q.p = 3;
  q.range = IntRange::open_closed(N, 2 * N);
  q.alpha0 = 0.0;
  q.alpha1 = 1.0 / std::sqrt(Nd);
  q.gamma0 = -w;
  q.gamma1 = w;
  Lemma3Check c;
  c.value = moment_semianalytic(q, budget).value;
  c.log_power = std::pow(std::log(Nd), 6);
  c.ratio = c.value / c.log_power;
  return c;
}

double exponent_recurrence(double beta0, int n) {
  if (!(beta0 >= 0.0) || !std::isfinite(beta0)) throw ParameterError("beta0 must be finite and >= 0");
  if (n < 0) throw ParameterError("iteration count must be >= 0");
  double beta = beta0;
  for (int i = 0; i < n; ++i) beta = beta / (1.0 + beta);
  return beta;
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ParameterError("fit_exponent needs at least two samples");
  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (const auto& [scale, value] : samples) {
    if (!(scale > 0.0) || !(value > 0.0) || !std::isfinite(scale) || !std::isfinite(value))
      throw ParameterError("fit_exponent samples must be finite and positive");
    xs.push_back(std::log(scale));
    ys.push_back(std::log(value));
    sx += xs.back();
    sy += ys.back();
  }
  const double n = static_cast<double>(xs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("fit_exponent needs at least two distinct scales");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace qmv
