#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "whlab/grid.hpp"
#include "whlab/weights.hpp"

namespace whlab {

using cplx = std::complex<double>;

/// Complex samples of an element of L^2_omega(R+) at the grid nodes.
class GridFunction {
public:
    GridFunction(Grid grid, Weight weight, Eigen::VectorXcd samples);

    static GridFunction zeros(const Grid& grid, const Weight& weight);
    static GridFunction sample(const Grid& grid, const Weight& weight,
                               const std::function<cplx(double)>& f);
    /// 1 on nodes inside [lo, hi], 0 elsewhere.
    static GridFunction indicator(const Grid& grid, const Weight& weight, double lo, double hi);

    const Grid& grid() const noexcept { return grid_; }
    const Weight& weight() const noexcept { return weight_; }
    const Eigen::VectorXcd& samples() const noexcept { return samples_; }
    Eigen::VectorXcd& samples() noexcept { return samples_; }
    int size() const noexcept { return static_cast<int>(samples_.size()); }

    /// Same grid and weight, different samples.
    GridFunction with_samples(Eigen::VectorXcd samples) const;

    /// Index of the last nonzero sample, -1 for the zero function.
    int last_support_index() const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx s);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

private:
    Grid grid_;
    Weight weight_;
    Eigen::VectorXcd samples_;
};

/// Throws PreconditionError unless both functions live on the same grid and weight.
void require_compatible(const GridFunction& f, const GridFunction& g);

/// h * sum f_j conj(g_j) omega(x_j)^2
cplx weighted_inner(const GridFunction& f, const GridFunction& g);
double weighted_norm(const GridFunction& f);

/// Unweighted coordinates u_j = f_j omega(x_j) sqrt(h); ||u||_2 = ||f||_omega.
struct IsometricVector {
    Eigen::VectorXcd values;
    double norm() const { return values.norm(); }
};

IsometricVector to_isometric(const GridFunction& f);
GridFunction from_isometric(const IsometricVector& u, const Grid& grid, const Weight& weight);

/// Per-node factors omega(x_j) sqrt(h).
Eigen::VectorXd isometric_scale(const Grid& grid, const Weight& weight);

/// g(t) = exp(-b^2 (t - t0)^2 / 2) exp(i (t - t0) eta0), sampled at the nodes.
/// Requires t0 > 1, b > 0 and 2 t0 < X.
GridFunction wave_packet(const Grid& grid, const Weight& weight, double eta0, double b,
                         double t0);

/// Cutoff profile: 0 on t <= 1/2 and t >= 2 t0 - 1/2, 1 on [1, 2 t0 - 1],
/// quintic C^2 ramps in between.
double cutoff_profile(double t, double t0);

/// cutoff_profile sampled at the nodes. Requires 2 t0 - 1/2 < X and t0 > 1.
GridFunction cutoff_window(const Grid& grid, const Weight& weight, double t0);

/// Realized bounds on the first and second divided differences of a window.
struct DerivativeBounds {
    double first = 0.0;
    double second = 0.0;
};
DerivativeBounds divided_difference_bounds(const GridFunction& window);

}  // namespace whlab
