#pragma once

#include <functional>

namespace ivlab {

struct QuadratureResult {
    double value;
    double error;  ///< estimated absolute error
};

/// Adaptive 61-point Gauss-Kronrod on a finite interval. Throws
/// QuadratureError when the estimated relative error exceeds `rel_tol`
/// (absolute `abs_floor` is accepted for integrals that are essentially 0).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                           double abs_floor = 0.0);

} // namespace ivlab
