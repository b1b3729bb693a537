#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls the library's numerical kernels; grids and weights are
// only used as value holders.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "whlab/grid_function.hpp"
#include "whlab/operators.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double pi() { return 3.14159265358979323846; }

/// Shift matrix in isometric coordinates from physical-coordinate action:
/// D A D^{-1} with D = diag(omega(x_j) sqrt(h)), omega evaluated directly.
inline Eigen::MatrixXcd shift_matrix(whlab::Side side, int k, const whlab::Grid& grid,
                                     const std::function<double(double)>& omega) {
    const int n = grid.count();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = side == whlab::Side::Right ? j - k : j + k;
        if (src >= 0 && src < n) a(j, src) = 1.0;
    }
    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) d[j] = omega(grid.node(j)) * std::sqrt(grid.spacing());
    return d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
}

/// h * sum_j phi((i - j) h) f_j restricted to i in [0, N), phi evaluated pointwise.
inline Eigen::VectorXcd convolve(const std::function<cplx(double)>& phi, const Eigen::VectorXcd& f,
                                 double h) {
    const auto n = f.size();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) acc += phi(static_cast<double>(i - j) * h) * f[j];
        out[i] = h * acc;
    }
    return out;
}

/// Composite Simpson rule for int_lo^hi g(t) dt with `panels` (even) panels.
inline cplx simpson(const std::function<cplx(double)>& g, double lo, double hi, int panels) {
    if (panels % 2) ++panels;
    const double dx = (hi - lo) / panels;
    cplx acc = g(lo) + g(hi);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(lo + i * dx);
    return acc * dx / 3.0;
}

/// Smallest singular value through Jacobi SVD (a different algorithm from the library's).
inline double sigma_min(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().minCoeff();
}

inline double sigma_max(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().maxCoeff();
}

/// Discrete-time Fourier transform h sum F_j e^{-i xi x_j}.
inline cplx dtft(const Eigen::VectorXcd& f, const whlab::Grid& g, double xi) {
    cplx acc = 0.0;
    for (int j = 0; j < f.size(); ++j) acc += f[j] * std::exp(cplx(0.0, -xi * g.node(j)));
    return g.spacing() * acc;
}

/// (1/2pi) int_{eta0-delta}^{eta0+delta} |F^(xi)|^2 dxi by Simpson quadrature.
inline double band_energy(const Eigen::VectorXcd& f, const whlab::Grid& g, double eta0,
                          double delta, int panels) {
    const cplx e = simpson([&](double xi) { return cplx(std::norm(dtft(f, g, xi))); },
                           eta0 - delta, eta0 + delta, panels);
    return e.real() / (2 * pi());
}

/// Random complex vector with entries supported on indices [0, last].
inline Eigen::VectorXcd random_samples(std::mt19937& rng, int n, int last) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j <= last && j < n; ++j) v[j] = cplx(nd(rng), nd(rng));
    return v;
}

/// Truncated Jordan-type shift J (ones on subdiagonal k) of size m.
inline Eigen::MatrixXcd jordan(int m, int k) {
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(m, m);
    for (int i = k; i < m; ++i) j(i, i - k) = 1.0;
    return j;
}

}  // namespace oracle
