#pragma once

#include <stdexcept>
#include <string>

namespace ivlab {

/// Base class for all library failures that are not plain precondition violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach its target; carries the achieved error estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Monte-Carlo estimate with no hits (or otherwise unusable).
class DegenerateEstimate : public Error {
public:
    using Error::Error;
};

/// Design matrix of a fit is (numerically) rank deficient.
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Iterative search gave up (bracket widening, certificate retries, ...).
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace ivlab
