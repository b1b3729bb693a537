#pragma once

#include <vector>

namespace whlab {

/// Uniform midpoint sampling of [0, X]: x_j = (j + 1/2) h, h = X / N.
///
/// Shifting by an integer multiple of h maps nodes onto nodes exactly, so
/// shift operators never need interpolation.
class Grid {
public:
    Grid(double extent, int count);

    double extent() const noexcept { return extent_; }
    int count() const noexcept { return count_; }
    double spacing() const noexcept { return spacing_; }

    double node(int j) const noexcept { return (j + 0.5) * spacing_; }
    std::vector<double> nodes() const;

    /// Number of grid steps k with t = k h. Throws PreconditionError when t is
    /// not an integer multiple of h (relative tolerance 1e-9).
    int steps(double t) const;
    bool is_multiple(double t) const noexcept;

    /// Same spacing, `factor` times the extent.
    Grid widened(int factor) const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.count_ == b.count_ && a.extent_ == b.extent_;
    }

private:
    double extent_;
    int count_;
    double spacing_;
};

/// Checked constructor; rejects X <= 0 or N < 2.
Grid build_grid(double extent, int count);

/// Grid with a prescribed spacing, N = round(X / h).
Grid grid_with_spacing(double spacing, int count);

}  // namespace whlab
