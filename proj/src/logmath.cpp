#include "ivlab/logmath.hpp"

#include <algorithm>
#include <stdexcept>

namespace ivlab {

double log_sum_exp(std::span<const double> xs) {
    double m = kNegInf;
    for (double x : xs) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    if (std::isinf(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

double log_binomial(long n, long k) {
    if (k < 0 || k > n || n < 0) return kNegInf;
    if (k == 0 || k == n) return 0.0;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_unit_ball_volume(int j) {
    if (j < 0) throw std::invalid_argument("unit ball dimension must be nonnegative");
    if (j == 0) return 0.0;
    const double half = 0.5 * j;
    return half * std::log(kPi) - std::lgamma(half + 1.0);
}

} // namespace ivlab
