#pragma once

#include <Eigen/Dense>

namespace ivlab {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm;
    int iterations;
};

/// min ||A x - b||_2 subject to x >= 0 (Lawson-Hanson active set).
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations = 0);

} // namespace ivlab
