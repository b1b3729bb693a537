#include "whlab/linalg.hpp"

#include <cmath>
#include <complex>

#include "whlab/errors.hpp"

namespace whlab::linalg {
namespace {

// Deterministic, generic start vector (no exact alignment with shift structure).
Eigen::VectorXcd start_vector(Eigen::Index n) {
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = static_cast<double>(i + 1);
        x[i] = std::complex<double>(1.0 + 0.5 * std::sin(1.7 * s), 0.25 * std::cos(0.9 * s));
    }
    return x.normalized();
}

}  // namespace

double largest_singular_value(const Eigen::MatrixXcd& m, int full_svd_limit, double rel_tol,
                              int max_iter) {
    if (m.size() == 0) return 0.0;
    if (!m.allFinite()) throw RangeError("matrix has non-finite entries");
    if (m.rows() <= full_svd_limit && m.cols() <= full_svd_limit) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, 0);
        return svd.singularValues()(0);
    }
    Eigen::VectorXcd x = start_vector(m.cols());
    double estimate = 0.0;
    double change = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd y = m.adjoint() * (m * x);
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::sqrt(norm);
        change = std::abs(next - estimate) / next;
        estimate = next;
        x = y / norm;
        if (it > 0 && change < rel_tol) return estimate;
    }
    throw ConvergenceError("power iteration for the operator norm did not converge", estimate,
                           change, x);
}

double smallest_singular_value(const Eigen::MatrixXcd& a, int full_svd_limit) {
    if (a.size() == 0) return 0.0;
    if (!a.allFinite()) throw RangeError("matrix has non-finite entries");
    if (a.rows() <= full_svd_limit) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, 0);
        return svd.singularValues()(svd.singularValues().size() - 1);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    Eigen::VectorXcd x = start_vector(a.cols());
    double estimate = 0.0;
    for (int it = 0; it < 500; ++it) {
        // x <- (A* A)^{-1} x
        Eigen::VectorXcd y = lu.adjoint().solve(x);
        y = lu.solve(y);
        const double norm = y.norm();
        if (!std::isfinite(norm)) return 0.0;
        const double next = 1.0 / std::sqrt(norm);
        const double change = std::abs(next - estimate) / std::max(next, 1e-300);
        estimate = next;
        x = y / norm;
        if (it > 0 && change < 1e-12) break;
    }
    return estimate;
}

MinimalSingularPair minimal_singular_pair(const Eigen::MatrixXcd& a) {
    if (!a.allFinite()) throw RangeError("matrix has non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const Eigen::Index last = svd.singularValues().size() - 1;
    return {svd.singularValues()(last), svd.matrixV().col(last)};
}

}  // namespace whlab::linalg
