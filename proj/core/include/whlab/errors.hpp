#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace whlab {

/// A precondition on an argument was violated (bad geometry, mismatched grids, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation left the representable range (e.g. exponential weight overflow).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Malformed external input (CSV, config).
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t row = 0)
        : std::runtime_error(what), row_(row) {}
    /// 1-based data row that triggered the error, 0 when not row-specific.
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Tilting a kernel by e^{a t} blows up its tails at the support edges.
class TiltOverflowError : public PreconditionError {
public:
    TiltOverflowError(const std::string& what, double tilt)
        : PreconditionError(what), tilt_(tilt) {}
    double tilt() const noexcept { return tilt_; }

private:
    double tilt_;
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_estimate, double residual,
                     Eigen::VectorXcd last_iterate)
        : std::runtime_error(what),
          last_estimate_(last_estimate),
          residual_(residual),
          last_iterate_(std::move(last_iterate)) {}

    double last_estimate() const noexcept { return last_estimate_; }
    double residual() const noexcept { return residual_; }
    const Eigen::VectorXcd& last_iterate() const noexcept { return last_iterate_; }

private:
    double last_estimate_;
    double residual_;
    Eigen::VectorXcd last_iterate_;
};

}  // namespace whlab
