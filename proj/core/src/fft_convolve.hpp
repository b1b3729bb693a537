#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace whlab::detail {

/// Full linear convolution (length a.size() + b.size() - 1) via zero-padded FFT.
Eigen::VectorXcd linear_convolve_fft(const std::vector<std::complex<double>>& a,
                                     const Eigen::VectorXcd& b);

}  // namespace whlab::detail
