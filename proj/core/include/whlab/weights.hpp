#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whlab/grid.hpp"

namespace whlab {

/// Analytically known ground orders of the two shift semigroups.
struct GroundOrders {
    double alpha0 = 0.0;  ///< growth rate of the right shifts
    double alpha1 = 0.0;  ///< growth rate of the truncated left shifts
};

/// Positive continuous weight on the half line.
///
/// All families are stored through ln(omega), so translation ratios
/// omega(x+t)/omega(x) are computed as exp of a difference and stay finite
/// even when omega itself would overflow.
class Weight {
public:
    enum class Family { Constant, Exponential, Polynomial, Oscillatory, Custom };

    using LogFunction = std::function<double(double)>;

    static Weight constant();
    /// omega(x) = e^{rate x}
    static Weight exponential(double rate);
    /// omega(x) = (1 + x)^exponent
    static Weight polynomial(double exponent);
    /// omega(x) = exp(gamma x sin(ln(1+x)) / (1 + ln(1+x)))
    static Weight oscillatory(double gamma);
    /// User weight given by omega itself; must be positive and finite on the grid.
    static Weight custom(std::string name, std::function<double(double)> omega,
                         std::optional<GroundOrders> known = std::nullopt);
    /// User weight given by ln(omega); preferred for fast-growing weights.
    static Weight custom_log(std::string name, LogFunction log_omega,
                             std::optional<GroundOrders> known = std::nullopt);

    Family family() const noexcept { return family_; }
    /// rate / exponent / gamma for the parametric families, 0 otherwise.
    double parameter() const noexcept { return parameter_; }
    const std::string& name() const noexcept { return name_; }
    const std::optional<GroundOrders>& known_orders() const noexcept { return known_; }

    /// ln(omega(x)); x must be >= 0.
    double log_value(double x) const;
    /// omega(x); throws RangeError when the value is not a finite positive double.
    double operator()(double x) const;
    /// omega(x_num) / omega(x_den), computed in log space.
    double ratio(double x_num, double x_den) const;

    /// Weight 1/omega (used for the left/right duality of shift matrices).
    Weight reciprocal() const;

    friend bool operator==(const Weight& a, const Weight& b) noexcept;

private:
    Weight(Family family, double parameter, std::string name,
           std::shared_ptr<const LogFunction> log_fn, std::optional<GroundOrders> known);

    Family family_;
    double parameter_;
    std::string name_;
    std::shared_ptr<const LogFunction> log_fn_;
    std::optional<GroundOrders> known_;
};

/// Evaluates omega(x). Rejects x < 0 (PreconditionError) and non-finite results (RangeError).
double evaluate_weight(const Weight& w, double x);

struct RatioBounds {
    double t = 0.0;
    double inf_ratio = 0.0;
    double sup_ratio = 0.0;
};

/// min and max of omega(x+t)/omega(x) over grid nodes x <= X - t.
///
/// When t is a multiple of h the pairs are node pairs (x_j, x_{j+k}), which
/// makes sup_ratio the exact norm of the discretized right shift.
RatioBounds ratio_bounds(const Weight& w, double t, const Grid& grid);

struct ProbeRecord {
    double t = 0.0;
    double inf_ratio = 0.0;   ///< on the widest window
    double sup_ratio = 0.0;   ///< on the widest window
    std::vector<double> inf_by_window;
    std::vector<double> sup_by_window;
    bool stable = false;
    bool overflow = false;
};

struct AdmissibilityReport {
    std::vector<double> windows;  ///< X, 2X, 4X
    double tolerance = 0.05;
    std::vector<ProbeRecord> probes;
    bool pass = false;
    bool growth_flag = false;
};

/// Empirical admissibility certificate on widening windows X, 2X, 4X (same h).
///
/// A probe passes when the sup ratio changes by less than `tolerance`
/// (relative) between the two widest windows and ln(inf ratio) is not running
/// off to -infinity (it may drift towards a positive limit). Bounds are taken
/// in log space, so a ratio that underflows is a failed probe and one that
/// overflows sets `overflow` and the growth flag. Failure is a verdict, never
/// an exception.
AdmissibilityReport admissibility_check(const Weight& w, std::span<const double> probes,
                                        const Grid& base, double tolerance = 0.05);

/// Built-in weights used by the verification suites.
std::vector<Weight> builtin_weights();

}  // namespace whlab
