#include "whlab/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whlab/errors.hpp"

namespace whlab {

GridFunction::GridFunction(Grid grid, Weight weight, Eigen::VectorXcd samples)
    : grid_(std::move(grid)), weight_(std::move(weight)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.count()) {
        throw PreconditionError("sample count " + std::to_string(samples_.size()) +
                                " does not match grid count " + std::to_string(grid_.count()));
    }
}

GridFunction GridFunction::zeros(const Grid& grid, const Weight& weight) {
    return GridFunction(grid, weight, Eigen::VectorXcd::Zero(grid.count()));
}

GridFunction GridFunction::sample(const Grid& grid, const Weight& weight,
                                  const std::function<cplx(double)>& f) {
    Eigen::VectorXcd s(grid.count());
    for (int j = 0; j < grid.count(); ++j) s[j] = f(grid.node(j));
    return GridFunction(grid, weight, std::move(s));
}

GridFunction GridFunction::indicator(const Grid& grid, const Weight& weight, double lo,
                                     double hi) {
    return sample(grid, weight, [lo, hi](double x) { return cplx(x >= lo && x <= hi ? 1.0 : 0.0); });
}

GridFunction GridFunction::with_samples(Eigen::VectorXcd samples) const {
    return GridFunction(grid_, weight_, std::move(samples));
}

int GridFunction::last_support_index() const noexcept {
    for (int j = size() - 1; j >= 0; --j) {
        if (samples_[j] != cplx(0.0)) return j;
    }
    return -1;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_compatible(*this, other);
    samples_ += other.samples_;
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_compatible(*this, other);
    samples_ -= other.samples_;
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    samples_ *= s;
    return *this;
}

void require_compatible(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) throw PreconditionError("grid functions live on different grids");
    if (!(f.weight() == g.weight())) {
        throw PreconditionError("grid functions carry different weights (" + f.weight().name() +
                                " vs " + g.weight().name() + ")");
    }
}

Eigen::VectorXd isometric_scale(const Grid& grid, const Weight& weight) {
    Eigen::VectorXd s(grid.count());
    const double root_h = std::sqrt(grid.spacing());
    for (int j = 0; j < grid.count(); ++j) s[j] = weight(grid.node(j)) * root_h;
    return s;
}

cplx weighted_inner(const GridFunction& f, const GridFunction& g) {
    require_compatible(f, g);
    const Eigen::VectorXd scale = isometric_scale(f.grid(), f.weight());
    cplx acc = 0.0;
    for (int j = 0; j < f.size(); ++j) {
        acc += f.samples()[j] * std::conj(g.samples()[j]) * (scale[j] * scale[j]);
    }
    return acc;
}

double weighted_norm(const GridFunction& f) { return to_isometric(f).norm(); }

IsometricVector to_isometric(const GridFunction& f) {
    const Eigen::VectorXd scale = isometric_scale(f.grid(), f.weight());
    return {f.samples().cwiseProduct(scale.cast<cplx>())};
}

GridFunction from_isometric(const IsometricVector& u, const Grid& grid, const Weight& weight) {
    if (u.values.size() != grid.count()) {
        throw PreconditionError("isometric vector length does not match the grid");
    }
    const Eigen::VectorXd scale = isometric_scale(grid, weight);
    return GridFunction(grid, weight, u.values.cwiseQuotient(scale.cast<cplx>()));
}

GridFunction wave_packet(const Grid& grid, const Weight& weight, double eta0, double b,
                         double t0) {
    if (!(b > 0.0)) throw PreconditionError("wave packet bandwidth b must be positive");
    if (!(t0 > 1.0)) throw PreconditionError("wave packet center t0 must exceed 1");
    if (!(2.0 * t0 < grid.extent())) {
        throw PreconditionError("wave packet escapes the window: 2 t0 = " +
                                std::to_string(2.0 * t0) + " >= X = " +
                                std::to_string(grid.extent()));
    }
    return GridFunction::sample(grid, weight, [=](double t) {
        const double y = t - t0;
        return std::exp(-0.5 * b * b * y * y) * std::polar(1.0, y * eta0);
    });
}

namespace {

// 6u^5 - 15u^4 + 10u^3: zero first and second derivatives at both ends.
double smootherstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

}  // namespace

double cutoff_profile(double t, double t0) {
    const double rise = smootherstep((t - 0.5) / 0.5);
    const double fall = smootherstep((2.0 * t0 - 0.5 - t) / 0.5);
    return std::min(rise, fall);
}

GridFunction cutoff_window(const Grid& grid, const Weight& weight, double t0) {
    if (!(t0 > 1.0)) throw PreconditionError("cutoff center t0 must exceed 1");
    if (!(2.0 * t0 - 0.5 < grid.extent())) {
        throw PreconditionError("cutoff window does not fit: 2 t0 - 1/2 >= X");
    }
    return GridFunction::sample(grid, weight,
                                [t0](double t) { return cplx(cutoff_profile(t, t0)); });
}

DerivativeBounds divided_difference_bounds(const GridFunction& window) {
    DerivativeBounds out;
    const double h = window.grid().spacing();
    const auto& s = window.samples();
    for (int j = 0; j + 1 < window.size(); ++j) {
        out.first = std::max(out.first, std::abs(s[j + 1] - s[j]) / h);
    }
    for (int j = 1; j + 1 < window.size(); ++j) {
        out.second = std::max(out.second, std::abs(s[j + 1] - 2.0 * s[j] + s[j - 1]) / (h * h));
    }
    return out;
}

}  // namespace whlab
