#pragma once

// Log-domain helpers. Every intrinsic volume in the library is carried as a
// natural logarithm; -inf encodes an exact zero.

#include <cmath>
#include <limits>
#include <span>

namespace ivlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// log(e^a + e^b), exact for -inf operands.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

/// log(sum_i e^{x_i}); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> xs);

/// log C(n, k); -inf outside 0 <= k <= n.
double log_binomial(long n, long k);

/// log n!
inline double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// log of the volume of the unit ball in R^j: log(pi^{j/2} / Gamma(j/2 + 1)).
double log_unit_ball_volume(int j);

} // namespace ivlab
