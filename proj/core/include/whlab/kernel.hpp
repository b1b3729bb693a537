#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace whlab {

/// Convolution kernel phi sampled on the grid spacing: value phi(d h) at
/// integer offsets d = first, ..., last. Outside the stored window phi = 0.
class Kernel {
public:
    using cplx = std::complex<double>;

    Kernel(double spacing, int first_offset, std::vector<cplx> samples);

    /// Samples f at the offsets covering [lo, hi].
    static Kernel sampled(const std::function<cplx(double)>& f, double lo, double hi,
                          double spacing);
    /// Unit-mass Gaussian exp(-(s-c)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)) on [c - w, c + w].
    static Kernel gaussian(double sigma, double center, double half_width, double spacing);
    /// Unit-mass Gaussian on [c - w, c + w] whose tails at the window edges are 1e-16 of the peak.
    static Kernel gaussian_bump(double center, double half_width, double spacing);
    /// Discrete delta of unit mass at s = t (single sample 1/h, zero neighbours).
    static Kernel delta(double t, double spacing);

    double spacing() const noexcept { return spacing_; }
    int first_offset() const noexcept { return first_; }
    int last_offset() const noexcept { return first_ + static_cast<int>(samples_.size()) - 1; }
    int size() const noexcept { return static_cast<int>(samples_.size()); }
    const std::vector<cplx>& samples() const noexcept { return samples_; }

    double support_lo() const noexcept { return first_ * spacing_; }
    double support_hi() const noexcept { return last_offset() * spacing_; }
    /// How far right of its input the kernel spreads mass (>= 0).
    double reach() const noexcept { return support_hi() > 0.0 ? support_hi() : 0.0; }

    /// phi(d h), zero outside the window.
    cplx at_offset(int d) const noexcept;

    /// phi(. - t); t must be a multiple of the spacing.
    Kernel shifted(double t) const;

    Kernel& operator*=(cplx s);
    friend Kernel operator*(cplx s, Kernel k) { return k *= s; }
    friend Kernel operator+(const Kernel& a, const Kernel& b);
    friend Kernel operator-(const Kernel& a, const Kernel& b);

private:
    double spacing_;
    int first_;
    std::vector<cplx> samples_;
};

}  // namespace whlab
