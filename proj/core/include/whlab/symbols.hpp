#pragma once

#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "whlab/operators.hpp"
#include "whlab/spectra.hpp"

namespace whlab {

/// Fourier convention: transform(f)(xi) = int f(t) e^{-i xi t} dt.
/// A symbol h(z) restricted to the line Im z = a is h_a(xi) = h(xi + i a).

struct AnalyticShift {
    double t = 0.0;
    Side side = Side::Right;
};
/// Trapezoid quadrature h sum w_d phi(d h) e^{-i z d h} (end weights 1/2).
struct KernelTransform {
    Kernel kernel;
};

class SymbolFunction {
public:
    struct Term {
        cplx coefficient;
        std::variant<AnalyticShift, KernelTransform> source;
    };

    static SymbolFunction shift(double t, Side side);
    static SymbolFunction kernel(Kernel k);
    /// Symbol of a shift/convolution spec; combinations add termwise.
    static SymbolFunction of(const OperatorSpec& spec);

    /// h(z). Kernel terms throw TiltOverflowError when the tilted tails exceed 1e-14.
    cplx operator()(cplx z) const;
    cplx on_line(double a, double xi) const { return (*this)(cplx(xi, a)); }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    /// A single shift term (no kernels, no combinations).
    bool is_pure_shift() const noexcept;

private:
    std::vector<Term> terms_;
};

/// e^{-itz} (right) or e^{itz} (left).
cplx shift_symbol(double t, Side side, cplx z);

/// Largest tilted edge sample |phi| e^{a s} allowed at the kernel window ends.
inline constexpr double kTiltEdgeLimit = 1e-14;

/// Throws TiltOverflowError carrying `a` when (phi)_a does not decay below
/// kTiltEdgeLimit at the window ends.
void check_tilt(const Kernel& k, double a);

/// h_a(xi) for each xi by trapezoid quadrature over the kernel window.
std::vector<cplx> convolution_symbol(const Kernel& k, double a, std::span<const double> xi);

/// Strip {a_min <= Im z <= a_max}; infinite ends describe half-planes.
struct StripSpec {
    double a_min = 0.0;
    double a_max = 0.0;
    std::string provenance;

    /// [-alpha1, alpha0] from measured growth orders.
    static StripSpec measured(const GrowthEstimate& right, const GrowthEstimate& left);
    /// {Im z < alpha0}: operators commuting with the right shifts.
    static StripSpec half_plane_o(const GrowthEstimate& right);
    /// {Im z > -alpha1}: operators commuting with the truncated left shifts.
    static StripSpec half_plane_v(const GrowthEstimate& left);

    bool contains(double a, double slack = 0.0) const noexcept {
        return a >= a_min - slack && a <= a_max + slack;
    }
};

struct SymbolLine {
    double a = 0.0;
    double max_abs = 0.0;
    double xi_at_max = 0.0;
    double xi_half_width = 0.0;  ///< final half-width of the sampled xi window
    double ratio_to_norm = 0.0;
    bool stabilized = false;
    bool within = false;
};

struct SymbolBoundReport {
    double operator_norm = 0.0;
    double slack = 0.05;
    std::vector<SymbolLine> lines;
    double cr_residual_max = 0.0;
    bool cr_ok = false;
    bool pass = false;
    bool inconclusive = false;  ///< some line max did not stabilize (and nothing failed)
};

/// Tilts further than this outside the strip are rejected.
inline constexpr double kStripMargin = 0.1;

/// max_xi |h_a(xi)| <= (1 + slack) ||T|| for each a, plus a finite-difference
/// Cauchy-Riemann check of h at the sampled lines.
SymbolBoundReport symbol_bound_check(const MatrixOperator& op, const SymbolFunction& symbol,
                                     const StripSpec& strip, std::span<const double> a_values,
                                     double slack = 0.05);

/// Relative Cauchy-Riemann residual |dh/da - i dh/dxi| / max(|h'|, |h|) at xi + i a, step 1e-3.
double cauchy_riemann_residual(const SymbolFunction& symbol, double a, double xi);

/// h sum F_j e^{-i xi x_j}.
cplx fourier_transform(const Eigen::VectorXcd& samples, const Grid& grid, double xi);

/// Fraction of ||F||^2 whose transform lies outside |xi - eta0| <= delta,
/// evaluated exactly through the autocorrelation of the samples.
double out_of_band_fraction(const Eigen::VectorXcd& samples, const Grid& grid, double eta0,
                            double delta);

struct QuasimodeParams {
    double a = 0.0;
    double eta0 = 0.0;
    double b = 0.25;
    double t0 = 10.0;
    double epsilon = 0.1;
};

struct QuasimodeReport {
    QuasimodeParams params;
    cplx lambda;
    double residual_ratio = 0.0;
    double delta = 0.0;
    bool delta_found = false;   ///< some band meets both the symbol and the energy budget
    double sup_in_band = 0.0;   ///< sup_{|xi - eta0| <= delta} |mu_a(xi) - lambda|
    double sup_global = 0.0;    ///< sup over the resolved band |xi - eta0| <= pi/h
    double out_of_band = 0.0;   ///< fraction of ||F||^2 outside the band
    double leakage = 0.0;       ///< sup_global sqrt(out_of_band)
    double witness_tolerance = 0.0;
    DerivativeBounds cutoff_bounds;
    bool passed = false;
};

/// Candidate band half-widths, tried in order.
inline constexpr double kQuasimodeDeltas[] = {0.25, 0.5, 1.0, 2.0};

/// Builds F = cutoff * packet, f = F e^{-a x}, lambda = mu(eta0 + i a) and
/// measures ||(T - lambda) f|| / ||f||.
QuasimodeReport quasimode_witness(const LinearAction& op, const SymbolFunction& symbol,
                                  const QuasimodeParams& params, const Grid& grid,
                                  const Weight& weight, const StripSpec& strip);
QuasimodeReport quasimode_witness(const MatrixOperator& op, const SymbolFunction& symbol,
                                  const QuasimodeParams& params, const StripSpec& strip);

struct QuasimodeSchedule {
    std::vector<QuasimodeReport> levels;
    std::vector<Grid> grids;
    double slack = 0.1;
    bool non_increasing = false;  ///< r_{l+1} <= (1 + slack) r_l
};

/// Level l uses b / 2^l, t0 2^l on a grid with extent and count scaled by 2^l.
QuasimodeSchedule quasimode_schedule(const OperatorSpec& spec, const Weight& weight,
                                     const QuasimodeParams& params, const Grid& base, int levels,
                                     const StripSpec& strip, double slack = 0.1);

enum class InclusionVerdict { Consistent, OutsideConsistent, Inconsistent };
const char* to_string(InclusionVerdict v) noexcept;

struct InclusionSample {
    cplx lambda;
    cplx preimage{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> sigma_by_n;
    std::vector<double> norm_by_n;
    InclusionVerdict verdict = InclusionVerdict::Inconsistent;
    std::string error;
};

struct InclusionReport {
    std::string operator_label;
    double spacing = 0.0;
    std::vector<int> n_schedule;
    std::vector<InclusionSample> samples;
    double consistent_fraction = 0.0;
};

/// sigma_min(lambda I - T_N) along the N schedule at fixed spacing.
/// "consistent": non-increasing and < inclusion_max at the largest N.
/// "outside-consistent": |lambda| > ||T_N|| and sigma_min >= |lambda| - ||T_N|| at every N.
InclusionReport inclusion_scan(const OperatorSpec& op, const Weight& weight, double spacing,
                               std::span<const int> n_schedule, std::span<const cplx> lambdas,
                               const ScanThresholds& thresholds = {});

/// Maps preimages z (Im z strictly inside the strip) through the symbol and scans the images.
InclusionReport spectrum_inclusion_scan(const OperatorSpec& op, const Weight& weight,
                                        const SymbolFunction& symbol, const StripSpec& strip,
                                        std::span<const cplx> preimages, double spacing,
                                        std::span<const int> n_schedule,
                                        const ScanThresholds& thresholds = {});

/// Low-discrepancy points xi in [xi_lo, xi_hi], a in [a_lo, a_hi].
std::vector<cplx> strip_preimages(int count, double xi_lo, double xi_hi, double a_lo, double a_hi);

}  // namespace whlab
