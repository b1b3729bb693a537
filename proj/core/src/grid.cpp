#include "whlab/grid.hpp"

#include <cmath>
#include <string>

#include "whlab/errors.hpp"

namespace whlab {

Grid::Grid(double extent, int count)
    : extent_(extent), count_(count), spacing_(extent / count) {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw PreconditionError("grid extent must be positive and finite, got " +
                                std::to_string(extent));
    }
    if (count < 2) {
        throw PreconditionError("grid needs at least 2 nodes, got " + std::to_string(count));
    }
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(count_));
    for (int j = 0; j < count_; ++j) x[static_cast<std::size_t>(j)] = node(j);
    return x;
}

bool Grid::is_multiple(double t) const noexcept {
    const double k = std::round(t / spacing_);
    return std::abs(t - k * spacing_) <= 1e-9 * spacing_;
}

int Grid::steps(double t) const {
    if (!std::isfinite(t) || !is_multiple(t)) {
        throw PreconditionError("shift length " + std::to_string(t) +
                                " is not an integer multiple of the grid spacing " +
                                std::to_string(spacing_));
    }
    return static_cast<int>(std::lround(t / spacing_));
}

Grid Grid::widened(int factor) const {
    return Grid(extent_ * factor, count_ * factor);
}

Grid build_grid(double extent, int count) { return Grid(extent, count); }

Grid grid_with_spacing(double spacing, int count) {
    if (!(spacing > 0.0)) {
        throw PreconditionError("grid spacing must be positive");
    }
    return Grid(spacing * count, count);
}

}  // namespace whlab
