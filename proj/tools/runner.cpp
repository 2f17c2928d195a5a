// SPDX-License-Identifier: Apache-2.0

#include "runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qmv/qmv.h"

namespace qmvlab {

namespace {

using json = nlohmann::ordered_json;

void check(qmv_status status) {
  switch (status) {
    case QMV_OK: return;
    case QMV_ERR_PARAM: throw UsageError(qmv_last_error());
    case QMV_ERR_BUDGET: {
      std::ostringstream msg;
      msg << qmv_last_error();
      if (qmv_last_required_budget() > 0.0) msg << " (required " << qmv_last_required_budget() << ")";
      throw BudgetError(msg.str());
    }
    default: throw std::runtime_error(qmv_last_error());
  }
}

template <class T>
T parse_integer(std::string_view text, const char* what) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  return v;
}

double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw UsageError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  return v;
}

std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view text, const char* what) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {parse_integer<std::int64_t>(text, what), 1};
  const auto num = parse_integer<std::int64_t>(text.substr(0, slash), what);
  const auto den = parse_integer<std::int64_t>(text.substr(slash + 1), what);
  if (den <= 0) throw UsageError(std::string(what) + " denominator must be positive");
  return {num, den};
}

std::int64_t checked_power(std::int64_t base, int e) {
  __int128 v = 1;
  for (int i = 0; i < e; ++i) {
    v *= base;
    if (v > std::numeric_limits<std::int64_t>::max()) throw UsageError("threshold overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  const __int128 v = static_cast<__int128>(a) * b;
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw UsageError("threshold overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

std::pair<double, double> parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw UsageError("window must be 'lo:hi'");
  const double lo = parse_double(text.substr(0, colon), "window");
  const double hi = parse_double(text.substr(colon + 1), "window");
  if (hi < lo) throw UsageError("window needs lo <= hi");
  return {lo, hi};
}

std::vector<std::pair<double, double>> parse_points(std::string_view text) {
  std::vector<std::pair<double, double>> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto [x, y] = parse_window(item);
    out.emplace_back(x, y);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const char* what) {
  for (const char* a : allowed)
    if (value == a) return;
  throw UsageError(std::string("unknown ") + what + ": '" + value + "'");
}

std::string rational_str(std::int64_t num, std::int64_t den) {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ---- subcommands ---------------------------------------------------------

struct Sink {
  Report& report;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void add(std::vector<Cell> row) {
    report.rows.push_back(std::move(row));
    if (report.with_timings) report.timings.push_back(elapsed_since(t0));
    t0 = std::chrono::steady_clock::now();
  }
};

qmv_range range_for(const std::string& kind, std::int64_t N) {
  return kind == "zero" ? qmv_range{0, N} : qmv_range{N + 1, 2 * N};
}

void run_count(const Config& c, Report& r) {
  const auto method = c.method.empty() ? std::string("spectral") : c.method;
  require_one_of(method, {"spectral", "bruteforce", "both"}, "count method");
  require_one_of(c.range, {"half", "zero"}, "range");
  const auto t2 = ScaledRational::parse(c.t2);
  const auto t4 = ScaledRational::parse(c.t4);
  const auto grid = c.grid();
  for (std::int64_t N : grid) {
    t2.at(N);
    t4.at(N);
  }

  r.columns = {"N", "p", "t2", "t4"};
  if (method == "both")
    r.columns.insert(r.columns.end(), {"count_spectral", "count_bruteforce", "verdict"});
  else
    r.columns.insert(r.columns.end(), {"method", "count"});

  Sink sink{r};
  for (int p : c.p) {
    for (std::int64_t N : grid) {
      const auto [a2, b2] = t2.at(N);
      const auto [a4, b4] = t4.at(N);
      const qmv_box box{p, range_for(c.range, N), {a2, b2}, {a4, b4}};
      std::vector<Cell> row{N, std::int64_t{p}, rational_str(a2, b2), rational_str(a4, b4)};
      auto count = [&](qmv_count_method m) {
        std::uint64_t v = 0;
        check(qmv_count(&box, m, c.budget, &v, nullptr));
        return static_cast<std::int64_t>(v);
      };
      if (method == "both") {
        const auto s = count(QMV_COUNT_SPECTRAL);
        const auto b = count(QMV_COUNT_BRUTEFORCE);
        row.insert(row.end(), {s, b, std::string(s == b ? "PASS" : "FAIL")});
      } else {
        row.emplace_back(method);
        row.emplace_back(count(method == "spectral" ? QMV_COUNT_SPECTRAL : QMV_COUNT_BRUTEFORCE));
      }
      sink.add(std::move(row));
    }
  }
}

void run_moment(const Config& c, Report& r) {
  const bool is_r = c.delta.has_value();
  const auto method_name = c.method.empty() ? std::string(is_r ? "semianalytic" : "exact") : c.method;
  require_one_of(method_name, {"exact", "semianalytic", "quadrature"}, "moment method");
  const qmv_moment_method method = method_name == "exact"          ? QMV_MOMENT_EXACT
                                   : method_name == "semianalytic" ? QMV_MOMENT_SEMIANALYTIC
                                                                   : QMV_MOMENT_QUADRATURE;
  const auto lambda = ScaledRational::parse(c.lambda);
  const auto [a0, a1] = parse_window(c.alpha_window);
  const auto grid = c.grid();
  if (is_r && method == QMV_MOMENT_EXACT) throw UsageError("R(Delta, N) needs the semianalytic or quadrature method");

  r.columns = {"N", "value", "log_value", "p", "error_estimate"};
  if (is_r) r.columns.push_back("lemma5_ratio");

  Sink sink{r};
  for (int p : c.p) {
    for (std::int64_t N : grid) {
      qmv_moment_result m{};
      double ratio = 0.0;
      if (is_r) {
        check(qmv_integral_R(*c.delta, N, p, method, c.budget, &m, &ratio));
      } else {
        const double w = lambda.value_at(static_cast<double>(N));
        const qmv_moment_query q{p, {N + 1, 2 * N}, a0, a1, -w, w, nullptr};
        check(qmv_moment(&q, method, 0.0, c.budget, &m));
      }
      std::vector<Cell> row{N, m.value, std::log(m.value), std::int64_t{p}, m.error_estimate};
      if (is_r) row.emplace_back(ratio);
      sink.add(std::move(row));
    }
  }
}

void run_fit(const Config& c, Report& r) {
  std::vector<std::pair<double, double>> samples;
  if (!c.in.empty()) {
    std::ifstream f(c.in, std::ios::binary);
    if (!f) throw IoError("cannot read '" + c.in + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    const Table t = parse_csv(buf.str());
    const auto xi = t.column(c.x_column);
    const auto yi = t.column(c.y_column);
    for (const auto& row : t.rows) {
      if (row.size() <= std::max(xi, yi)) throw UsageError("short CSV row in '" + c.in + "'");
      samples.emplace_back(parse_double(row[xi], "sample"), parse_double(row[yi], "sample"));
    }
  } else {
    samples = parse_points(c.points);
  }
  if (samples.empty()) throw UsageError("fit needs samples via --in or --points");

  std::vector<double> xs, ys;
  for (const auto& [x, y] : samples) {
    xs.push_back(x);
    ys.push_back(y);
  }
  double slope = 0.0, intercept = 0.0, residual = 0.0;
  check(qmv_fit_exponent(xs.data(), ys.data(), xs.size(), &slope, &intercept, &residual));
  r.columns = {"samples", "slope", "intercept", "residual"};
  Sink sink{r};
  sink.add({static_cast<std::int64_t>(xs.size()), slope, intercept, residual});
}

void run_btransform(const Config& c, Report& r) {
  require_one_of(c.norm, {"sqrt", "linear"}, "normalization");
  if (c.alpha.empty()) throw UsageError("btransform needs --alpha");
  std::vector<double> alphas;
  for (const auto& a : c.alpha) alphas.push_back(AlphaValue::parse(a).value);
  const auto grid = c.grid();
  for (double a : alphas)
    for (std::int64_t N : grid)
      if (!qmv_validate_domain(a, c.gamma, N))
        throw UsageError("phase outside the admissible domain at alpha=" + format_double(a) +
                         ", N=" + std::to_string(N));

  r.columns = {"alpha", "gamma", "N", "lambda2", "nu_first", "nu_last", "residual", "envelope",
               "lhs_re", "lhs_im", "rhs_re", "rhs_im"};
  Sink sink{r};
  for (double a : alphas) {
    for (std::int64_t N : grid) {
      const qmv_smooth_phase phase{a, c.gamma, N, c.A};
      qmv_btransform b{};
      check(qmv_b_transform_residual(&phase, c.norm == "sqrt" ? QMV_NORM_SQRT : QMV_NORM_LINEAR,
                                     c.drop_endpoints ? 1 : 0, &b));
      sink.add({a, c.gamma, N, b.lambda2, b.nu_first, b.nu_last, b.residual,
                qmv_b_transform_envelope(N, b.lambda2, 10.0), b.lhs.re, b.lhs.im, b.rhs.re, b.rhs.im});
    }
  }
}

std::vector<AlphaValue> alphas_or_samples(const Config& c, std::mt19937_64& rng) {
  std::vector<AlphaValue> out;
  for (const auto& a : c.alpha) out.push_back(AlphaValue::parse(a));
  if (out.empty()) {
    if (c.samples <= 0) throw UsageError("need --alpha or --samples");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < c.samples; ++i) out.push_back({u(rng), std::nullopt});
  }
  return out;
}

void run_weyl(const Config& c, Report& r) {
  std::mt19937_64 rng(c.seed);
  const auto alphas = alphas_or_samples(c, rng);
  const auto grid = c.grid();
  for (int k : c.k)
    if (k < 1) throw UsageError("k must be >= 1");

  r.columns = {"k", "N", "alpha", "re", "im", "abs", "precision_warning"};
  Sink sink{r};
  for (int k : c.k) {
    for (std::int64_t N : grid) {
      for (const auto& a : alphas) {
        qmv_complex s{};
        int warn = 0;
        if (a.rational)
          check(qmv_weyl_sum_rational(k, N, a.rational->first, a.rational->second, &s));
        else
          check(qmv_weyl_sum(k, N, a.value, &s, &warn));
        sink.add({std::int64_t{k}, N, a.str(), s.re, s.im, std::hypot(s.re, s.im), std::int64_t{warn}});
      }
    }
  }
}

void run_theorem4(const Config& c, Report& r) {
  std::mt19937_64 rng(c.seed);
  const auto alphas = alphas_or_samples(c, rng);
  const auto grid = c.grid();
  r.columns = {"k", "N", "alpha", "H", "B", "lhs", "rhs", "ratio", "a", "q", "theta",
               "q_window", "theta_window", "probabilistic_rhs", "precision_warning"};
  Sink sink{r};
  for (int k : c.k) {
    for (std::int64_t N : grid) {
      for (const auto& a : alphas) {
        qmv_theorem4 t{};
        check(qmv_theorem4_report(k, N, a.value, c.epsilon, &t));
        sink.add({std::int64_t{k}, N, a.value, t.H, t.B, t.lhs, t.rhs, t.ratio, t.approx.a, t.approx.q,
                  t.approx.theta, std::int64_t{t.corollary_q_window}, std::int64_t{t.corollary_theta_window},
                  t.probabilistic_rhs, std::int64_t{t.precision_warning}});
      }
    }
  }
}

void run_lemma7(const Config& c, Report& r) {
  const int samples = c.samples > 0 ? c.samples : 1000;
  constexpr std::int64_t kScale = std::int64_t{1} << 53;
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::int64_t> alpha_num(0, kScale - 1);
  std::uniform_int_distribution<std::int64_t> delta_num(1, kScale / 5);
  std::uniform_int_distribution<std::int64_t> h_dist(1, 10000);

  r.columns = {"alpha", "H", "delta", "a", "q", "theta", "B", "bound1", "bound2", "verdict"};
  Sink sink{r};
  for (int i = 0; i < samples; ++i) {
    const std::int64_t an = alpha_num(rng);
    const std::int64_t H = h_dist(rng);
    const std::int64_t dn = delta_num(rng);
    const double alpha = static_cast<double>(an) / static_cast<double>(kScale);
    const double delta = static_cast<double>(dn) / static_cast<double>(kScale);
    qmv_rational_approx approx{};
    check(qmv_best_rational(alpha, H, &approx));
    std::int64_t B = 0;
    check(qmv_near_integer_count_exact({an, kScale}, H, {dn, kScale}, &B));
    double b1 = 0.0, b2 = 0.0;
    int has_b2 = 0;
    check(qmv_heathbrown_bounds(&approx, H, delta, &b1, &b2, &has_b2));
    const bool ok = static_cast<double>(B) <= b1 && (!has_b2 || static_cast<double>(B) <= b2);
    sink.add({alpha, H, delta, approx.a, approx.q, approx.theta, B, b1,
              has_b2 ? Cell{b2} : Cell{std::string()}, std::string(ok ? "PASS" : "FAIL")});
  }
}

void run_report(const Config& c, Report& r) {
  require_one_of(c.kind, {"theorem4", "lemma7"}, "report kind");
  if (c.kind == "theorem4")
    run_theorem4(c, r);
  else
    run_lemma7(c, r);
}

// ---- output --------------------------------------------------------------

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return csv_escape(std::get<std::string>(cell));
}

json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  const auto& s = std::get<std::string>(cell);
  return s.empty() ? json(nullptr) : json(s);
}

}  // namespace

// ---- value types ---------------------------------------------------------

ScaledRational ScaledRational::parse(std::string_view text) {
  ScaledRational r;
  if (text.empty()) throw UsageError("empty threshold");
  std::string_view coeff = text;
  std::string_view power;
  if (const auto pos = text.find("N^"); pos != std::string_view::npos) {
    power = text.substr(pos + 2);
    coeff = text.substr(0, pos);
    if (!coeff.empty()) {
      if (coeff.back() != '*') throw UsageError("threshold must look like 'a/b*N^e'");
      coeff.remove_suffix(1);
    }
    r.exponent = parse_integer<int>(power, "exponent");
    if (r.exponent < -8 || r.exponent > 8) throw UsageError("exponent must lie in [-8, 8]");
  }
  if (coeff.empty()) {
    r.num = 1;
  } else {
    std::tie(r.num, r.den) = parse_fraction(coeff, "threshold");
  }
  return r;
}

std::pair<std::int64_t, std::int64_t> ScaledRational::at(std::int64_t N) const {
  if (exponent >= 0) return {checked_mul(num, checked_power(N, exponent)), den};
  return {num, checked_mul(den, checked_power(N, -exponent))};
}

double ScaledRational::value_at(double N) const {
  return static_cast<double>(num) / static_cast<double>(den) * std::pow(N, exponent);
}

std::string ScaledRational::str() const {
  std::string s = rational_str(num, den);
  if (exponent != 0) s += "*N^" + std::to_string(exponent);
  return s;
}

AlphaValue AlphaValue::parse(std::string_view text) {
  AlphaValue a;
  if (text.find('/') != std::string_view::npos) {
    a.rational = parse_fraction(text, "alpha");
    a.value = static_cast<double>(a.rational->first) / static_cast<double>(a.rational->second);
  } else {
    a.value = parse_double(text, "alpha");
  }
  return a;
}

std::string AlphaValue::str() const {
  return rational ? rational_str(rational->first, rational->second) : format_double(value);
}

json Config::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["N"] = grid();
  j["p"] = p;
  if (subcommand == "count") {
    j["range"] = range;
    j["t2"] = t2;
    j["t4"] = t4;
  }
  if (subcommand == "moment") {
    j["lambda"] = lambda;
    j["alpha_window"] = alpha_window;
    if (delta) j["delta"] = *delta;
  }
  if (!method.empty()) j["method"] = method;
  if (!alpha.empty()) j["alpha"] = alpha;
  if (subcommand == "btransform") {
    j["gamma"] = gamma;
    j["A"] = A;
    j["norm"] = norm;
    j["drop_endpoints"] = drop_endpoints;
  }
  if (subcommand == "weyl" || subcommand == "report") j["k"] = k;
  if (subcommand == "report") {
    j["kind"] = kind;
    j["epsilon"] = epsilon;
  }
  if (subcommand == "fit") {
    j["in"] = in;
    j["x"] = x_column;
    j["y"] = y_column;
    j["points"] = points;
  }
  j["seed"] = seed;
  j["samples"] = samples;
  j["budget"] = budget;
  j["format"] = format;
  return j;
}

std::vector<std::int64_t> Config::grid() const {
  if (!n_values.empty()) return n_values;
  if (n_min < 1) return {};
  const std::int64_t hi = n_max == 0 ? n_min : n_max;
  if (hi < n_min || n_steps < 1) return {};
  std::vector<std::int64_t> out;
  for (int i = 0; i < n_steps; ++i) {
    const double t = n_steps == 1 ? 0.0 : static_cast<double>(i) / (n_steps - 1);
    const auto v = static_cast<std::int64_t>(
        std::llround(static_cast<double>(n_min) * std::pow(static_cast<double>(hi) / n_min, t)));
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw UsageError("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// ---- run -----------------------------------------------------------------

Report run(const Config& config) {
  static const std::map<std::string, std::function<void(const Config&, Report&)>> table{
      {"count", run_count},   {"moment", run_moment}, {"fit", run_fit},
      {"btransform", run_btransform}, {"weyl", run_weyl},   {"report", run_report},
  };
  const auto it = table.find(config.subcommand);
  if (it == table.end()) throw UsageError("unknown subcommand '" + config.subcommand + "'");
  require_one_of(config.format, {"csv", "json"}, "format");
  if (config.p.empty()) throw UsageError("--p needs at least one value");
  if (config.k.empty()) throw UsageError("--k needs at least one value");
  if (config.subcommand != "fit" && !(config.subcommand == "report" && config.kind == "lemma7") &&
      config.grid().empty())
    throw UsageError("N grid is empty: pass --n or --n-min [--n-max --n-steps]");

  Report report;
  report.config = config.to_json();
  report.with_timings = config.timings;
  it->second(config, report);
  return report;
}

std::string emit_plot_data(const Report& report) {
  if (report.rows.empty()) throw UsageError("report has no rows");
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(report.columns[i]);
  }
  if (report.with_timings) out += ",elapsed_s";
  out += '\n';
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    if (report.with_timings) out += "," + format_double(report.timings[r]);
    out += '\n';
  }
  return out;
}

std::string emit_json(const Report& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = qmv_version();
  j["config"] = report.config;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[report.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  j["timings"] = report.with_timings ? json(report.timings) : json::array();
  return j.dump(2) + "\n";
}

Table parse_csv(std::string_view text) {
  Table t;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(fields));
      fields.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (!field.empty() || !fields.empty()) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw UsageError("empty CSV");
  t.header = std::move(lines.front());
  t.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
  return t;
}

// ---- command line --------------------------------------------------------

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Mean values of quadratic-quartic exponential sums", "qmv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qmv_version()));

  auto grid_opts = [&](CLI::App* s) {
    s->add_option("--n", c.n_values, "Explicit N values");
    s->add_option("--n-min", c.n_min, "Smallest N of a geometric grid");
    s->add_option("--n-max", c.n_max, "Largest N of a geometric grid");
    s->add_option("--n-steps", c.n_steps, "Number of geometric grid points");
  };
  auto common_opts = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "Seed for sampled parameters");
    s->add_option("--budget", c.budget, "Enumeration or grid budget (0 = library default)");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", c.out, "Output path (default stdout)");
    s->add_flag("--timings", c.timings, "Report per-row wall time");
  };

  auto* count = app.add_subcommand("count", "Count solutions of the (s2, s4) box system");
  grid_opts(count);
  common_opts(count);
  count->add_option("--p", c.p, "Number of variables per side");
  count->add_option("--t2", c.t2, "Quadratic threshold, 'a/b' or 'a/b*N^e'");
  count->add_option("--t4", c.t4, "Quartic threshold, 'a/b' or 'a/b*N^e'");
  count->add_option("--range", c.range, "half: (N, 2N], zero: [0, N]");
  count->add_option("--method", c.method, "spectral, bruteforce or both");

  auto* moment = app.add_subcommand("moment", "Mean value of |S|^(2p) over a frequency window");
  grid_opts(moment);
  common_opts(moment);
  moment->add_option("--p", c.p, "Half the moment order");
  moment->add_option("--lambda", c.lambda, "Half-width of the gamma window, 'a/b*N^e'");
  moment->add_option("--alpha-window", c.alpha_window, "alpha window 'lo:hi'");
  moment->add_option("--delta", c.delta, "Evaluate R(Delta, N) instead");
  moment->add_option("--method", c.method, "exact, semianalytic or quadrature");

  auto* fit = app.add_subcommand("fit", "Least-squares log-log slope");
  common_opts(fit);
  fit->add_option("--in", c.in, "CSV file with samples");
  fit->add_option("--x", c.x_column, "Column holding the scale");
  fit->add_option("--y", c.y_column, "Column holding the value");
  fit->add_option("--points", c.points, "Inline samples 'x:y,x:y,...'");

  auto* bt = app.add_subcommand("btransform", "B-transform residual for alpha x^2 + gamma x^4");
  grid_opts(bt);
  common_opts(bt);
  bt->add_option("--alpha", c.alpha, "alpha values");
  bt->add_option("--gamma", c.gamma, "gamma");
  bt->add_option("--A", c.A, "Upper range factor, 1 < A <= 2");
  bt->add_option("--norm", c.norm, "sqrt or linear");
  bt->add_flag("--drop-endpoints", c.drop_endpoints, "Omit the extreme nu");

  auto* weyl = app.add_subcommand("weyl", "Weyl sums sum_{n<=N} e(alpha n^k)");
  grid_opts(weyl);
  common_opts(weyl);
  weyl->add_option("--k", c.k, "Degrees");
  weyl->add_option("--alpha", c.alpha, "Decimal or 'a/q'");
  weyl->add_option("--samples", c.samples, "Random alpha count when --alpha is absent");

  auto* report = app.add_subcommand("report", "Weyl-inequality reports and rational-approximation checks");
  grid_opts(report);
  common_opts(report);
  report->add_option("--kind", c.kind, "theorem4 or lemma7");
  report->add_option("--k", c.k, "Degrees");
  report->add_option("--alpha", c.alpha, "Decimal or 'a/q'");
  report->add_option("--epsilon", c.epsilon, "Exponent slack");
  report->add_option("--samples", c.samples, "Random sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (e.get_name() == "CallForVersion" ? std::string(qmv_version()) + "\n" : app.help());
      return kExitOk;
    }
    err << "qmv: " << e.what() << "\n";
    return kExitUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (!c.out.empty()) {
      std::ofstream probe(c.out, std::ios::binary | std::ios::app);
      if (!probe) throw IoError("cannot write '" + c.out + "'");
    }
    const Report rep = run(c);
    const std::string text = c.format == "json" ? emit_json(rep) : emit_plot_data(rep);
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
      if (!f || !(f << text)) throw IoError("cannot write '" + c.out + "'");
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qmv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "qmv: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const IoError& e) {
    err << "qmv: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "qmv: internal error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace qmvlab
