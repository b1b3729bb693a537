#include "whlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "whlab/errors.hpp"

namespace whlab {
namespace {

std::string format_param(const char* family, const char* key, double value) {
    std::ostringstream os;
    os << family << '(' << key << '=' << value << ')';
    return os.str();
}

double relative_change(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

Weight::Weight(Family family, double parameter, std::string name,
               std::shared_ptr<const LogFunction> log_fn, std::optional<GroundOrders> known)
    : family_(family),
      parameter_(parameter),
      name_(std::move(name)),
      log_fn_(std::move(log_fn)),
      known_(known) {}

Weight Weight::constant() {
    return Weight(Family::Constant, 0.0, "constant", nullptr, GroundOrders{0.0, 0.0});
}

Weight Weight::exponential(double rate) {
    return Weight(Family::Exponential, rate, format_param("exponential", "rate", rate), nullptr,
                  GroundOrders{rate, -rate});
}

Weight Weight::polynomial(double exponent) {
    return Weight(Family::Polynomial, exponent, format_param("polynomial", "exponent", exponent),
                  nullptr, GroundOrders{0.0, 0.0});
}

Weight Weight::oscillatory(double gamma) {
    return Weight(Family::Oscillatory, gamma, format_param("oscillatory", "gamma", gamma), nullptr,
                  std::nullopt);
}

Weight Weight::custom(std::string name, std::function<double(double)> omega,
                      std::optional<GroundOrders> known) {
    auto log_fn = std::make_shared<const LogFunction>(
        [omega = std::move(omega)](double x) { return std::log(omega(x)); });
    return Weight(Family::Custom, 0.0, std::move(name), std::move(log_fn), known);
}

Weight Weight::custom_log(std::string name, LogFunction log_omega,
                          std::optional<GroundOrders> known) {
    return Weight(Family::Custom, 0.0, std::move(name),
                  std::make_shared<const LogFunction>(std::move(log_omega)), known);
}

double Weight::log_value(double x) const {
    if (!(x >= 0.0)) {
        throw PreconditionError("weight evaluated at negative coordinate " + std::to_string(x));
    }
    switch (family_) {
        case Family::Constant:
            return 0.0;
        case Family::Exponential:
            return parameter_ * x;
        case Family::Polynomial:
            return parameter_ * std::log1p(x);
        case Family::Oscillatory: {
            const double l = std::log1p(x);
            return parameter_ * x * std::sin(l) / (1.0 + l);
        }
        case Family::Custom:
            return (*log_fn_)(x);
    }
    return 0.0;
}

double Weight::operator()(double x) const {
    const double value = std::exp(log_value(x));
    if (!std::isfinite(value) || value <= 0.0) {
        throw RangeError("weight " + name_ + " is not a finite positive number at x = " +
                         std::to_string(x));
    }
    return value;
}

double Weight::ratio(double x_num, double x_den) const {
    const double r = std::exp(log_value(x_num) - log_value(x_den));
    if (!std::isfinite(r) || r <= 0.0) {
        throw RangeError("weight ratio of " + name_ + " out of range at (" +
                         std::to_string(x_num) + ", " + std::to_string(x_den) + ")");
    }
    return r;
}

Weight Weight::reciprocal() const {
    auto self = std::make_shared<const Weight>(*this);
    std::optional<GroundOrders> known;
    if (known_) known = GroundOrders{known_->alpha1, known_->alpha0};
    return Weight(Family::Custom, 0.0, "reciprocal(" + name_ + ")",
                  std::make_shared<const LogFunction>(
                      [self](double x) { return -self->log_value(x); }),
                  known);
}

bool operator==(const Weight& a, const Weight& b) noexcept {
    if (a.family_ != b.family_) return false;
    if (a.family_ == Weight::Family::Custom) return a.log_fn_ == b.log_fn_;
    return a.parameter_ == b.parameter_;
}

double evaluate_weight(const Weight& w, double x) { return w(x); }

namespace {

struct LogBounds {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
};

// min and max of ln omega(x+t) - ln omega(x) over the same pairs as ratio_bounds
LogBounds log_ratio_bounds(const Weight& w, double t, const Grid& grid) {
    if (!(t > 0.0) || t >= grid.extent()) {
        throw PreconditionError("ratio_bounds needs 0 < t < X, got t = " + std::to_string(t));
    }
    LogBounds out;
    auto take = [&](double num, double den) {
        const double d = w.log_value(num) - w.log_value(den);
        out.lo = std::min(out.lo, d);
        out.hi = std::max(out.hi, d);
    };
    if (grid.is_multiple(t)) {
        const int k = grid.steps(t);
        for (int j = 0; j + k < grid.count(); ++j) take(grid.node(j + k), grid.node(j));
    } else {
        for (int j = 0; j < grid.count() && grid.node(j) + t <= grid.extent(); ++j) {
            take(grid.node(j) + t, grid.node(j));
        }
    }
    if (out.lo > out.hi) throw PreconditionError("no grid node satisfies x <= X - t");
    return out;
}

bool representable(double log_r) {
    const double r = std::exp(log_r);
    return std::isfinite(r) && r > 0.0;
}

}  // namespace

RatioBounds ratio_bounds(const Weight& w, double t, const Grid& grid) {
    const LogBounds b = log_ratio_bounds(w, t, grid);
    if (!representable(b.lo) || !representable(b.hi)) {
        throw RangeError("weight ratio of " + w.name() + " out of range for t = " +
                         std::to_string(t));
    }
    return {t, std::exp(b.lo), std::exp(b.hi)};
}

AdmissibilityReport admissibility_check(const Weight& w, std::span<const double> probes,
                                        const Grid& base, double tolerance) {
    if (probes.empty()) throw PreconditionError("admissibility_check needs at least one probe");

    AdmissibilityReport report;
    report.tolerance = tolerance;
    const std::vector<Grid> windows{base, base.widened(2), base.widened(4)};
    for (const auto& g : windows) report.windows.push_back(g.extent());

    bool all_pass = true;
    for (double t : probes) {
        ProbeRecord rec;
        rec.t = t;
        std::vector<double> log_inf, log_sup;
        for (const auto& g : windows) {
            const LogBounds b = log_ratio_bounds(w, t, g);
            log_inf.push_back(b.lo);
            log_sup.push_back(b.hi);
            rec.inf_by_window.push_back(std::exp(b.lo));
            rec.sup_by_window.push_back(std::exp(b.hi));
        }
        rec.inf_ratio = rec.inf_by_window.back();
        rec.sup_ratio = rec.sup_by_window.back();
        rec.overflow = !std::isfinite(rec.sup_ratio);
        const auto& s = rec.sup_by_window;
        // the inf may drift (towards a positive limit) but ln inf must not run
        // off to -infinity; measured in log space so underflow is still seen
        const double floor_log = std::min(log_inf[1], 0.0) * (1.0 + tolerance) - tolerance;
        const bool inf_held = log_inf[2] >= floor_log;
        if (rec.overflow) {
            report.growth_flag = true;
        } else {
            rec.stable = relative_change(s[1], s[2]) < tolerance && inf_held;
            if (s[2] > s[1] * (1.0 + tolerance) && s[1] > s[0]) report.growth_flag = true;
        }
        all_pass = all_pass && rec.stable;
        report.probes.push_back(std::move(rec));
    }
    report.pass = all_pass;
    return report;
}

std::vector<Weight> builtin_weights() {
    return {Weight::constant(), Weight::exponential(1.0), Weight::exponential(-1.0),
            Weight::polynomial(2.0), Weight::oscillatory(1.0)};
}

}  // namespace whlab
