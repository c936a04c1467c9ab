#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace svamp::logspace {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(exp(x) + exp(y)) without overflow.
inline double add(double x, double y) {
  if (x == neg_inf) return y;
  if (y == neg_inf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(-std::abs(x - y)));
}

/// log(exp(x) - exp(y)) for x >= y.
inline double sub(double x, double y) {
  if (y == neg_inf) return x;
  return x + std::log1p(-std::exp(y - x));
}

/// log C(n, k) via lgamma; exact for the small-integer range through the
/// multiplicative fast path.
inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return neg_inf;
  k = std::min(k, n - k);
  if (n <= 60) {
    double c = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) {
      c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::log(std::round(c));
  }
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// Exact C(n, k) as a double for n <= 60, log-space otherwise.
inline double binomial_value(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 60) {
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) {
      c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(c);
  }
  return std::exp(binomial(n, k));
}

}  // namespace svamp::logspace
