#include "whlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "whlab/errors.hpp"

namespace whlab {

Kernel::Kernel(double spacing, int first_offset, std::vector<cplx> samples)
    : spacing_(spacing), first_(first_offset), samples_(std::move(samples)) {
    if (!(spacing > 0.0)) throw PreconditionError("kernel spacing must be positive");
    if (samples_.empty()) throw PreconditionError("kernel needs at least one sample");
}

Kernel Kernel::sampled(const std::function<cplx(double)>& f, double lo, double hi,
                       double spacing) {
    if (!(hi >= lo)) throw PreconditionError("kernel window needs lo <= hi");
    const int first = static_cast<int>(std::floor(lo / spacing + 1e-9));
    const int last = static_cast<int>(std::ceil(hi / spacing - 1e-9));
    std::vector<cplx> s;
    s.reserve(static_cast<std::size_t>(last - first + 1));
    for (int d = first; d <= last; ++d) s.push_back(f(d * spacing));
    return Kernel(spacing, first, std::move(s));
}

Kernel Kernel::gaussian(double sigma, double center, double half_width, double spacing) {
    if (!(sigma > 0.0) || !(half_width > 0.0)) {
        throw PreconditionError("gaussian kernel needs positive sigma and half width");
    }
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    return sampled(
        [=](double s) {
            const double y = (s - center) / sigma;
            return cplx(norm * std::exp(-0.5 * y * y));
        },
        center - half_width, center + half_width, spacing);
}

Kernel Kernel::gaussian_bump(double center, double half_width, double spacing) {
    // exp(-w^2 / (2 sigma^2)) = 1e-16
    const double sigma = half_width / std::sqrt(2.0 * 16.0 * std::numbers::ln10);
    return gaussian(sigma, center, half_width, spacing);
}

Kernel Kernel::delta(double t, double spacing) {
    const double k = std::round(t / spacing);
    if (std::abs(t - k * spacing) > 1e-9 * spacing) {
        throw PreconditionError("delta position must be a multiple of the spacing");
    }
    return Kernel(spacing, static_cast<int>(k) - 1, {0.0, 1.0 / spacing, 0.0});
}

Kernel::cplx Kernel::at_offset(int d) const noexcept {
    if (d < first_ || d > last_offset()) return 0.0;
    return samples_[static_cast<std::size_t>(d - first_)];
}

Kernel Kernel::shifted(double t) const {
    const double k = std::round(t / spacing_);
    if (std::abs(t - k * spacing_) > 1e-9 * spacing_) {
        throw PreconditionError("kernel shift must be a multiple of the spacing");
    }
    return Kernel(spacing_, first_ + static_cast<int>(k), samples_);
}

Kernel& Kernel::operator*=(cplx s) {
    for (auto& v : samples_) v *= s;
    return *this;
}

namespace {

Kernel combine(const Kernel& a, const Kernel& b, double sign) {
    if (a.spacing() != b.spacing()) throw PreconditionError("kernel spacing mismatch");
    const int first = std::min(a.first_offset(), b.first_offset());
    const int last = std::max(a.last_offset(), b.last_offset());
    std::vector<Kernel::cplx> s;
    s.reserve(static_cast<std::size_t>(last - first + 1));
    for (int d = first; d <= last; ++d) s.push_back(a.at_offset(d) + sign * b.at_offset(d));
    return Kernel(a.spacing(), first, std::move(s));
}

}  // namespace

Kernel operator+(const Kernel& a, const Kernel& b) { return combine(a, b, 1.0); }
Kernel operator-(const Kernel& a, const Kernel& b) { return combine(a, b, -1.0); }

}  // namespace whlab
