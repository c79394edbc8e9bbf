// Test-side reference values computed by deliberately different routes than
// the library: partial sums at integer arguments, Romberg (trapezoid +
// Richardson) integration on the log axis instead of Gauss-Legendre panels.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline constexpr double kGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// psi(k) = -gamma + sum_{j<k} 1/j for integer k >= 1.
inline double digamma_int(int k) {
  double s = -kGamma;
  for (int j = 1; j < k; ++j) s += 1.0 / j;
  return s;
}

// psi'(k) = pi^2/6 - sum_{j<k} 1/j^2 for integer k >= 1.
inline double trigamma_int(int k) {
  double s = kPi * kPi / 6.0;
  for (int j = 1; j < k; ++j) s -= 1.0 / (static_cast<double>(j) * j);
  return s;
}

inline double loglogistic_mean_ref(int r, int n) {
  return digamma_int(r) - digamma_int(n - r + 1);
}

inline double loglogistic_var_ref(int r, int n) {
  return trigamma_int(r) + trigamma_int(n - r + 1);
}

// Romberg integration: trapezoid refinement with Richardson extrapolation.
template <class F>
double romberg(const F& f, double a, double b, double tol, int max_level = 20) {
  std::vector<double> row{0.5 * (b - a) * (f(a) + f(b))};
  double prev = row[0];
  std::uint64_t panels = 1;
  for (int level = 1; level <= max_level; ++level) {
    const double h = (b - a) / static_cast<double>(panels);
    double mid = 0.0;
    for (std::uint64_t i = 0; i < panels; ++i) {
      mid += f(a + (static_cast<double>(i) + 0.5) * h);
    }
    std::vector<double> next(static_cast<std::size_t>(level) + 1);
    next[0] = 0.5 * (row[0] + h * mid);
    double pow4 = 1.0;
    for (int k = 1; k <= level; ++k) {
      pow4 *= 4.0;
      next[static_cast<std::size_t>(k)] =
          next[static_cast<std::size_t>(k - 1)] +
          (next[static_cast<std::size_t>(k - 1)] -
           row[static_cast<std::size_t>(k - 1)]) /
              (pow4 - 1.0);
    }
    row = std::move(next);
    panels *= 2;
    const double val = row.back();
    if (level >= 5 && std::fabs(val - prev) <= tol * std::fmax(1.0, std::fabs(val))) {
      return val;
    }
    prev = val;
  }
  return row.back();
}

// E[(log V_(r))^p] for the r-th smallest of n unit exponentials, integrated
// on the log axis s = log t.  The integrand is below 1e-18 of its peak
// outside [-45, 5] for every n <= 500.
inline double weibull_log_moment_ref(int r, int n, int p, double tol = 1e-11) {
  const double q = static_cast<double>(n - r + 1);
  const double logc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(r)) -
                      std::lgamma(q);
  auto f = [&](double s) {
    const double t = std::exp(s);
    double lw = -t * q + s + logc;
    if (r > 1) lw += (r - 1) * std::log(-std::expm1(-t));
    double sp = 1.0;
    for (int i = 0; i < p; ++i) sp *= s;
    return sp * std::exp(lw);
  };
  return romberg(f, -45.0, 5.0, tol);
}

}  // namespace oracle
