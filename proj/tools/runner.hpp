// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner for the qmv command-line tool. Everything here goes
// through the C API in qmv/qmv.h.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qmvlab {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitUsage = 2, kExitBudget = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// num/den * N^exponent, e.g. "1/2*N^3" or "0".
struct ScaledRational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  int exponent = 0;

  static ScaledRational parse(std::string_view text);
  // Exact value at N as num/den; throws UsageError on overflow.
  std::pair<std::int64_t, std::int64_t> at(std::int64_t N) const;
  double value_at(double N) const;
  std::string str() const;
};

// Decimal or "a/q".
struct AlphaValue {
  double value = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> rational;

  static AlphaValue parse(std::string_view text);
  std::string str() const;
};

struct Config {
  std::string subcommand;
  std::vector<int> p{3};
  std::vector<std::int64_t> n_values;
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  int n_steps = 1;
  std::string t2 = "0";
  std::string t4 = "0";
  std::vector<std::string> alpha;
  double gamma = 0.0;
  std::string lambda = "1*N^-3";
  std::string alpha_window = "0:1";
  std::optional<double> delta;
  std::vector<int> k{8};
  double epsilon = 0.01;
  std::uint64_t seed = 1;
  int samples = 0;
  std::uint64_t budget = 0;
  std::string format = "csv";
  std::string out;
  std::string in;
  std::string x_column = "N";
  std::string y_column = "value";
  std::string points;  // inline fit samples "x:y,x:y"
  std::string method;
  std::string range = "half";
  std::string kind = "theorem4";
  std::string norm = "sqrt";
  double A = 2.0;
  bool drop_endpoints = false;
  bool timings = false;

  nlohmann::ordered_json to_json() const;
  // N grid: explicit values, else geometric from n_min to n_max.
  std::vector<std::int64_t> grid() const;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Report {
  nlohmann::ordered_json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<double> timings;  // seconds per row, filled when enabled
  bool with_timings = false;
};

// Validates the config and runs the grid. Throws UsageError, BudgetError.
Report run(const Config& config);

std::string emit_plot_data(const Report& report);
std::string emit_json(const Report& report);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

Table parse_csv(std::string_view text);

std::string format_double(double v);

// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qmvlab
