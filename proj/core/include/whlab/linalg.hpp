#pragma once

#include <Eigen/Dense>

namespace whlab::linalg {

/// Above this size, singular values come from iterative methods instead of a full SVD.
inline constexpr int kFullSvdLimit = 1200;

/// Largest singular value. Power iteration on M*M stops at relative change
/// `rel_tol` and throws ConvergenceError after `max_iter` steps.
double largest_singular_value(const Eigen::MatrixXcd& m, int full_svd_limit = kFullSvdLimit,
                              double rel_tol = 1e-10, int max_iter = 10000);

/// Smallest singular value (full SVD, or inverse iteration on A*A above the limit).
double smallest_singular_value(const Eigen::MatrixXcd& a, int full_svd_limit = kFullSvdLimit);

struct MinimalSingularPair {
    double sigma = 0.0;
    Eigen::VectorXcd right;  ///< unit right singular vector
};

/// Smallest singular value and its right singular vector from a full SVD.
MinimalSingularPair minimal_singular_pair(const Eigen::MatrixXcd& a);

}  // namespace whlab::linalg
