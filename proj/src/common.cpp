// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qmv/common.hpp"
#include "qmv/phase.hpp"

namespace qmv {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v >= 0) return to_string(static_cast<u128>(v));
  return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
}

double power_count(std::int64_t base, int p) {
  double out = 1.0;
  for (int i = 0; i < p; ++i) out *= static_cast<double>(base);
  return out;
}

double frac_product(double x, i128 m) {
  const double hi = static_cast<double>(m);
  const double lo = static_cast<double>(m - static_cast<i128>(hi));
  const double p1 = x * hi;
  const double e1 = std::fma(x, hi, -p1);
  const double p2 = x * lo;
  // p1 - floor(p1) is exact; the small corrections are folded in afterwards.
  double f = p1 - std::floor(p1);
  f += e1;
  f += p2;
  return frac(f);
}

std::string format_count(double v) {
  char buf[32];
  if (v < 1e15)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace qmv
