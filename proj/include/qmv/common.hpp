// SPDX-License-Identifier: Apache-2.0
//
// Shared vocabulary types, 128-bit helpers and the exception hierarchy used
// throughout the core. The C API translates these exceptions into status
// codes at the boundary.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmv {

using i128 = __int128;
using u128 = unsigned __int128;

/// Closed integer interval [first, last]. The half-open range
/// (N, 2N] is `IntRange::open_closed(N, 2N)`.
struct IntRange {
  std::int64_t first = 0;
  std::int64_t last = -1;

  static constexpr IntRange open_closed(std::int64_t lo, std::int64_t hi) {
    return IntRange{lo + 1, hi};
  }
  constexpr std::int64_t size() const { return last >= first ? last - first + 1 : 0; }
  constexpr bool empty() const { return last < first; }
  constexpr std::int64_t max_abs() const {
    const std::int64_t a = first < 0 ? -first : first;
    const std::int64_t b = last < 0 ? -last : last;
    return a > b ? a : b;
  }
  friend constexpr bool operator==(const IntRange&, const IntRange&) = default;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation would exceed its configured enumeration or grid
/// budget. `required()` reports the budget the request would need.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, double required)
      : std::runtime_error(what), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string to_string(i128 v);
std::string to_string(u128 v);

/// Saturating (range length)^p, used for budget checks before enumeration.
double power_count(std::int64_t base, int p);

// Integer-valued double for messages: exact below 1e15, else %.3e.
std::string format_count(double v);

}  // namespace qmv
