#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace tomo {

// Stability gates for the three-term recurrences. These are engineering
// bounds, not mathematical ones; the recurrences themselves are stable but
// downstream consumers (tomogram series) are validated only up to here.
inline constexpr int kMaxPolynomialDegree = 64;
inline constexpr int kMaxLaguerreIndex = 32;

namespace detail {
inline void check_degree(int n, const char* name) {
  if (n < 0) throw std::invalid_argument(std::string(name) + ": negative degree");
  if (n > kMaxPolynomialDegree)
    throw std::invalid_argument(std::string(name) + ": degree above stability gate (" +
                                std::to_string(kMaxPolynomialDegree) + ")");
}
}  // namespace detail

/// Laguerre polynomial L_n(x), three-term recurrence.
inline double laguerre(int n, double x) {
  detail::check_degree(n, "laguerre");
  if (n == 0) return 1.0;
  double lm1 = 1.0;        // L_0
  double l = 1.0 - x;      // L_1
  for (int k = 1; k < n; ++k) {
    double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

/// Physicists' Hermite polynomial H_n(x), three-term recurrence.
inline double hermite(int n, double x) {
  detail::check_degree(n, "hermite");
  if (n == 0) return 1.0;
  double hm1 = 1.0;        // H_0
  double h = 2.0 * x;      // H_1
  for (int k = 1; k < n; ++k) {
    double hp1 = 2.0 * x * h - 2.0 * k * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

/// Hermite value in scaled form: returns (log|H_n(x)|, sign). H_64 overflows
/// doubles already at |x| ~ 20, but the tomogram series needs it multiplied
/// by a Gaussian; keeping the log keeps the product representable.
inline std::pair<double, int> hermite_log(int n, double x) {
  detail::check_degree(n, "hermite");
  if (n == 0) return {0.0, 1};
  double scale = 0.0;  // accumulated log of the renormalizations
  double hm1 = 1.0;
  double h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    double hp1 = 2.0 * x * h - 2.0 * k * hm1;
    hm1 = h;
    h = hp1;
    double m = std::max(std::abs(h), std::abs(hm1));
    if (m > 1e120) {
      double f = 1e-120;
      h *= f;
      hm1 *= f;
      scale += std::log(1e120);
    }
  }
  if (h == 0.0) return {-std::numeric_limits<double>::infinity(), 1};
  return {std::log(std::abs(h)) + scale, h > 0.0 ? 1 : -1};
}

/// Bessel function J0: power series below the |x| = 14 split, Hankel
/// asymptotic expansion with adaptive truncation above. Absolute accuracy
/// ~1e-10 on both branches.
inline double bessel_j0(double x) {
  double ax = std::abs(x);
  if (ax < 14.0) {
    double q = 0.25 * x * x;  // (x/2)^2
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
  }
  // J0 = sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)] with
  // a_m = prod_{j<=m} (2j-1)^2 / (m! 8^m); truncate at the smallest term.
  double inv = 1.0 / ax;
  double p = 0.0, q = 0.0;
  double t = 1.0;  // a_m * inv^m
  double prev = 1e300;
  for (int m = 0; m <= 20; ++m) {
    if (m > 0) {
      double f = 2.0 * m - 1.0;
      t *= f * f / (8.0 * m) * inv;
    }
    if (t >= prev || t < 1e-18) break;  // asymptotic series: stop at the smallest term
    prev = t;
    int k = m / 2;
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    if (m % 2 == 0)
      p += sgn * t;
    else
      q -= sgn * t;
  }
  double chi = ax - 0.25 * M_PI;
  return std::sqrt(2.0 / (M_PI * ax)) * (p * std::cos(chi) - q * std::sin(chi));
}

/// log of n! via lgamma.
inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// log of the binomial coefficient C(n, k).
inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace tomo
