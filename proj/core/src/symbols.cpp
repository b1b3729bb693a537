#include "whlab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "whlab/errors.hpp"
#include "whlab/linalg.hpp"

namespace whlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr cplx kI(0.0, 1.0);

cplx kernel_transform(const Kernel& k, cplx z) {
    check_tilt(k, z.imag());
    const double h = k.spacing();
    const auto& s = k.samples();
    cplx acc = 0.0;
    for (int i = 0; i < k.size(); ++i) {
        const double w = (k.size() > 1 && (i == 0 || i == k.size() - 1)) ? 0.5 : 1.0;
        const double t = (k.first_offset() + i) * h;
        acc += w * s[i] * std::exp(-kI * z * t);
    }
    return h * acc;
}

void append_terms(std::vector<SymbolFunction::Term>& out, cplx coef, const OperatorSpec& spec) {
    std::visit(overloaded{
                   [&](const RightShift& op) {
                       out.push_back({coef, AnalyticShift{op.t, Side::Right}});
                   },
                   [&](const LeftShift& op) {
                       out.push_back({coef, AnalyticShift{op.t, Side::Left}});
                   },
                   [&](const Convolution& op) { out.push_back({coef, KernelTransform{op.kernel}}); },
                   [&](const LinearCombo& op) {
                       for (const auto& term : op.terms) append_terms(out, coef * term.coefficient, term.op);
                   },
               },
               spec.variant);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

SymbolFunction SymbolFunction::shift(double t, Side side) {
    SymbolFunction s;
    s.terms_.push_back({1.0, AnalyticShift{t, side}});
    return s;
}

SymbolFunction SymbolFunction::kernel(Kernel k) {
    SymbolFunction s;
    s.terms_.push_back({1.0, KernelTransform{std::move(k)}});
    return s;
}

SymbolFunction SymbolFunction::of(const OperatorSpec& spec) {
    SymbolFunction s;
    append_terms(s.terms_, 1.0, spec);
    return s;
}

cplx SymbolFunction::operator()(cplx z) const {
    cplx acc = 0.0;
    for (const auto& term : terms_) {
        const cplx v = std::visit(
            overloaded{
                [&](const AnalyticShift& s) { return shift_symbol(s.t, s.side, z); },
                [&](const KernelTransform& k) { return kernel_transform(k.kernel, z); },
            },
            term.source);
        acc += term.coefficient * v;
    }
    return acc;
}

bool SymbolFunction::is_pure_shift() const noexcept {
    return terms_.size() == 1 && std::holds_alternative<AnalyticShift>(terms_.front().source);
}

cplx shift_symbol(double t, Side side, cplx z) {
    return side == Side::Right ? std::exp(-kI * t * z) : std::exp(kI * t * z);
}

void check_tilt(const Kernel& k, double a) {
    const double h = k.spacing();
    const double lo = std::abs(k.samples().front()) * std::exp(a * k.first_offset() * h);
    const double hi = std::abs(k.samples().back()) * std::exp(a * k.last_offset() * h);
    if (!(lo <= kTiltEdgeLimit) || !(hi <= kTiltEdgeLimit)) {
        throw TiltOverflowError("tilt a = " + fmt(a) + " leaves kernel tails of " +
                                    fmt(std::max(lo, hi)) + " at the support edges",
                                a);
    }
}

std::vector<cplx> convolution_symbol(const Kernel& k, double a, std::span<const double> xi) {
    check_tilt(k, a);
    std::vector<cplx> out;
    out.reserve(xi.size());
    for (double x : xi) out.push_back(kernel_transform(k, cplx(x, a)));
    return out;
}

StripSpec StripSpec::measured(const GrowthEstimate& right, const GrowthEstimate& left) {
    if (right.side != Side::Right || left.side != Side::Left)
        throw PreconditionError("measured strip needs a right and a left growth estimate");
    StripSpec s{-left.alpha_hat, right.alpha_hat, ""};
    if (s.a_min > s.a_max) {
        if (s.a_min - s.a_max > 0.02)
            throw PreconditionError("measured orders give an empty strip: alpha0 + alpha1 = " +
                                    fmt(right.alpha_hat + left.alpha_hat));
        s.a_min = s.a_max = 0.5 * (s.a_min + s.a_max);
    }
    s.provenance = "U from growth orders alpha0 = " + fmt(right.alpha_hat) +
                   ", alpha1 = " + fmt(left.alpha_hat);
    return s;
}

StripSpec StripSpec::half_plane_o(const GrowthEstimate& right) {
    if (right.side != Side::Right) throw PreconditionError("O needs the right growth estimate");
    return {-std::numeric_limits<double>::infinity(), right.alpha_hat,
            "O from alpha0 = " + fmt(right.alpha_hat)};
}

StripSpec StripSpec::half_plane_v(const GrowthEstimate& left) {
    if (left.side != Side::Left) throw PreconditionError("V needs the left growth estimate");
    return {-left.alpha_hat, std::numeric_limits<double>::infinity(),
            "V from alpha1 = " + fmt(left.alpha_hat)};
}

double cauchy_riemann_residual(const SymbolFunction& symbol, double a, double xi) {
    const double step = 1e-3;
    const cplx z(xi, a);
    const cplx d_xi = (symbol(z + step) - symbol(z - step)) / (2 * step);
    const cplx d_a = (symbol(z + kI * step) - symbol(z - kI * step)) / (2 * step);
    const double scale = std::max({std::abs(d_xi), std::abs(d_a), std::abs(symbol(z)), 1e-300});
    return std::abs(d_a - kI * d_xi) / scale;
}

namespace {

struct LineMax {
    double value = 0.0;
    double xi = 0.0;
};

LineMax scan_line(const SymbolFunction& symbol, double a, double half_width, double dxi) {
    LineMax best;
    const int n = static_cast<int>(std::ceil(2 * half_width / dxi));
    for (int i = 0; i <= n; ++i) {
        const double xi = -half_width + i * (2 * half_width / n);
        const double v = std::abs(symbol.on_line(a, xi));
        if (v > best.value) best = {v, xi};
    }
    // local refinement around the coarse peak
    for (int i = -50; i <= 50; ++i) {
        const double xi = best.xi + i * dxi / 50;
        const double v = std::abs(symbol.on_line(a, xi));
        if (v > best.value) best = {v, xi};
    }
    return best;
}

}  // namespace

SymbolBoundReport symbol_bound_check(const MatrixOperator& op, const SymbolFunction& symbol,
                                     const StripSpec& strip, std::span<const double> a_values,
                                     double slack) {
    if (a_values.empty()) throw PreconditionError("symbol_bound_check needs at least one tilt");
    for (double a : a_values) {
        if (!strip.contains(a, kStripMargin)) {
            throw PreconditionError("tilt a = " + fmt(a) + " lies outside the measured strip [" +
                                    fmt(strip.a_min) + ", " + fmt(strip.a_max) + "] by more than " +
                                    fmt(kStripMargin));
        }
    }
    SymbolBoundReport rep;
    rep.operator_norm = operator_norm(op);
    rep.slack = slack;
    bool all_within = true;
    bool all_stable = true;
    for (double a : a_values) {
        SymbolLine line;
        line.a = a;
        double half_width = 8.0;
        const double dxi = 0.01;
        LineMax prev = scan_line(symbol, a, half_width, dxi);
        for (int it = 0; it < 8; ++it) {
            half_width *= 2;
            const LineMax next = scan_line(symbol, a, half_width, dxi);
            const bool stable = std::abs(next.value - prev.value) <= 0.01 * std::max(next.value, 1e-300);
            prev = next;
            if (stable) {
                line.stabilized = true;
                break;
            }
        }
        line.max_abs = prev.value;
        line.xi_at_max = prev.xi;
        line.xi_half_width = half_width;
        line.ratio_to_norm = rep.operator_norm > 0.0 ? line.max_abs / rep.operator_norm
                                                     : std::numeric_limits<double>::infinity();
        line.within = line.max_abs <= (1 + slack) * rep.operator_norm;
        all_within = all_within && line.within;
        all_stable = all_stable && line.stabilized;
        for (double xi : {-2.3, -0.6, 0.45, 1.7}) {
            rep.cr_residual_max = std::max(rep.cr_residual_max, cauchy_riemann_residual(symbol, a, xi));
        }
        rep.lines.push_back(line);
    }
    rep.cr_ok = rep.cr_residual_max <= 1e-4;
    rep.pass = all_within && rep.cr_ok && all_stable;
    rep.inconclusive = !all_stable && all_within && rep.cr_ok;
    return rep;
}

cplx fourier_transform(const Eigen::VectorXcd& samples, const Grid& grid, double xi) {
    cplx acc = 0.0;
    for (int j = 0; j < samples.size(); ++j) acc += samples[j] * std::polar(1.0, -xi * grid.node(j));
    return grid.spacing() * acc;
}

double out_of_band_fraction(const Eigen::VectorXcd& samples, const Grid& grid, double eta0,
                            double delta) {
    const double h = grid.spacing();
    if (!(delta > 0.0) || delta >= std::numbers::pi / h)
        throw PreconditionError("band half-width must lie in (0, pi/h)");
    const int n = static_cast<int>(samples.size());
    const double total = samples.squaredNorm();
    if (total == 0.0) throw PreconditionError("out-of-band fraction of the zero function");
    int lo = n, hi = -1;
    for (int j = 0; j < n; ++j) {
        if (samples[j] != cplx(0.0)) {
            lo = std::min(lo, j);
            hi = j;
        }
    }
    // (1/2pi) int_V |F^|^2 = (h^2/2pi) sum_d c_d K(d h), c_d = sum_j F_j conj(F_{j-d})
    double in_band = 0.0;
    const int span = hi - lo;
    for (int d = -span; d <= span; ++d) {
        cplx c = 0.0;
        for (int j = std::max(lo, lo + d); j <= std::min(hi, hi + d); ++j) c += samples[j] * std::conj(samples[j - d]);
        const double s = d * h;
        const double kernel_abs = d == 0 ? 2 * delta : 2 * std::sin(delta * s) / s;
        in_band += (c * std::polar(kernel_abs, -eta0 * s)).real();
    }
    in_band *= h / (2 * std::numbers::pi);  // h^2/(2 pi) against ||F||^2 = h sum |F_j|^2
    return std::clamp(1.0 - in_band / total, 0.0, 1.0);
}

QuasimodeReport quasimode_witness(const LinearAction& op, const SymbolFunction& symbol,
                                  const QuasimodeParams& p, const Grid& grid,
                                  const Weight& weight, const StripSpec& strip) {
    if (!strip.contains(p.a, 1e-9)) {
        throw PreconditionError("quasimode tilt a = " + fmt(p.a) + " lies outside the strip [" +
                                fmt(strip.a_min) + ", " + fmt(strip.a_max) + "]");
    }
    if (!(p.epsilon > 0.0)) throw PreconditionError("quasimode epsilon must be positive");
    const GridFunction packet = wave_packet(grid, weight, p.eta0, p.b, p.t0);
    const GridFunction window = cutoff_window(grid, weight, p.t0);
    const Eigen::VectorXcd F = packet.samples().cwiseProduct(window.samples());
    Eigen::VectorXcd tilted(F.size());
    for (int j = 0; j < F.size(); ++j) tilted[j] = F[j] * std::exp(-p.a * grid.node(j));
    const GridFunction f(grid, weight, tilted);

    QuasimodeReport rep;
    rep.params = p;
    rep.lambda = symbol(cplx(p.eta0, p.a));
    rep.residual_ratio = weighted_norm(op(f) - rep.lambda * f) / weighted_norm(f);
    rep.cutoff_bounds = divided_difference_bounds(window);

    auto band_sup = [&](double half_width, int count) {
        double best = 0.0;
        for (int i = 0; i <= count; ++i) {
            const double xi = p.eta0 - half_width + 2 * half_width * i / count;
            best = std::max(best, std::abs(symbol.on_line(p.a, xi) - rep.lambda));
        }
        return best;
    };
    // The band must satisfy both budgets: |mu_a - lambda| <= sqrt(eps) inside
    // and at most eps of the packet energy outside. Without such a band the
    // report keeps the smallest band meeting the symbol budget and fails.
    const double target = std::sqrt(p.epsilon);
    const double nyquist = std::numbers::pi / grid.spacing();
    struct Band {
        double delta, sup, oob;
    };
    auto measure = [&](double delta) {
        return Band{delta, band_sup(delta, 400),
                    out_of_band_fraction(F, grid, p.eta0, std::min(delta, 0.999 * nyquist))};
    };
    std::optional<Band> first_symbol_ok, chosen;
    for (double delta : kQuasimodeDeltas) {
        const Band b = measure(delta);
        if (b.sup > target) continue;
        if (!first_symbol_ok) first_symbol_ok = b;
        if (b.oob <= p.epsilon) {
            chosen = b;
            break;
        }
    }
    const Band band = chosen            ? *chosen
                      : first_symbol_ok ? *first_symbol_ok
                                        : measure(std::end(kQuasimodeDeltas)[-1]);
    rep.delta = band.delta;
    rep.delta_found = chosen.has_value();
    rep.sup_in_band = band.sup;
    rep.out_of_band = band.oob;
    rep.sup_global = band_sup(nyquist, 4000);
    rep.leakage = rep.sup_global * std::sqrt(rep.out_of_band);
    rep.witness_tolerance = rep.sup_in_band + rep.leakage;
    rep.passed = rep.delta_found && rep.residual_ratio <= rep.witness_tolerance;
    return rep;
}

QuasimodeReport quasimode_witness(const MatrixOperator& op, const SymbolFunction& symbol,
                                  const QuasimodeParams& params, const StripSpec& strip) {
    return quasimode_witness(action_of(op), symbol, params, op.grid, op.weight, strip);
}

QuasimodeSchedule quasimode_schedule(const OperatorSpec& spec, const Weight& weight,
                                     const QuasimodeParams& params, const Grid& base, int levels,
                                     const StripSpec& strip, double slack) {
    if (levels < 1) throw PreconditionError("quasimode schedule needs at least one level");
    QuasimodeSchedule out;
    out.slack = slack;
    const SymbolFunction symbol = SymbolFunction::of(spec);
    QuasimodeParams p = params;
    for (int l = 0; l < levels; ++l) {
        const int scale = 1 << l;
        const Grid grid = build_grid(base.extent() * scale, base.count() * scale);
        p.b = params.b / scale;
        p.t0 = params.t0 * scale;
        const MatrixOperator m = assemble_matrix(spec, grid, weight, true);
        out.levels.push_back(quasimode_witness(m, symbol, p, strip));
        out.grids.push_back(grid);
    }
    out.non_increasing = true;
    for (std::size_t l = 1; l < out.levels.size(); ++l) {
        if (out.levels[l].residual_ratio > (1 + slack) * out.levels[l - 1].residual_ratio)
            out.non_increasing = false;
    }
    return out;
}

const char* to_string(InclusionVerdict v) noexcept {
    switch (v) {
        case InclusionVerdict::Consistent: return "consistent";
        case InclusionVerdict::OutsideConsistent: return "outside-consistent";
        case InclusionVerdict::Inconsistent: return "inconsistent";
    }
    return "?";
}

InclusionReport inclusion_scan(const OperatorSpec& op, const Weight& weight, double spacing,
                               std::span<const int> n_schedule, std::span<const cplx> lambdas,
                               const ScanThresholds& thresholds) {
    if (n_schedule.empty()) throw PreconditionError("inclusion scan needs an N schedule");
    if (!std::is_sorted(n_schedule.begin(), n_schedule.end()) ||
        std::adjacent_find(n_schedule.begin(), n_schedule.end()) != n_schedule.end())
        throw PreconditionError("inclusion scan N schedule must be increasing");
    InclusionReport rep;
    rep.operator_label = op.describe();
    rep.spacing = spacing;
    rep.n_schedule.assign(n_schedule.begin(), n_schedule.end());
    for (const cplx& l : lambdas) {
        InclusionSample s;
        s.lambda = l;
        rep.samples.push_back(s);
    }
    for (int n : n_schedule) {
        const Grid grid = grid_with_spacing(spacing, n);
        const MatrixOperator m = assemble_matrix(op, grid, weight);
        const double norm = operator_norm(m);
        const PseudospectrumGrid ps = pseudospectrum(m, lambdas);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            rep.samples[i].sigma_by_n.push_back(ps.sigma_min[i]);
            rep.samples[i].norm_by_n.push_back(norm);
            if (!ps.node_errors[i].empty() && rep.samples[i].error.empty())
                rep.samples[i].error = ps.node_errors[i];
        }
    }
    int consistent = 0;
    for (auto& s : rep.samples) {
        if (!s.error.empty()) continue;
        const double mod = std::abs(s.lambda);
        bool outside = true;
        for (std::size_t k = 0; k < s.sigma_by_n.size(); ++k) {
            const double gap = mod - s.norm_by_n[k];
            if (!(gap > 0.0) || s.sigma_by_n[k] < gap - thresholds.neumann_slack) outside = false;
        }
        if (outside) {
            s.verdict = InclusionVerdict::OutsideConsistent;
        } else if (s.sigma_by_n.back() < thresholds.inclusion_max &&
                   non_increasing(s.sigma_by_n, thresholds.floor)) {
            s.verdict = InclusionVerdict::Consistent;
            ++consistent;
        }
    }
    rep.consistent_fraction =
        rep.samples.empty() ? 0.0 : static_cast<double>(consistent) / rep.samples.size();
    return rep;
}

InclusionReport spectrum_inclusion_scan(const OperatorSpec& op, const Weight& weight,
                                        const SymbolFunction& symbol, const StripSpec& strip,
                                        std::span<const cplx> preimages, double spacing,
                                        std::span<const int> n_schedule,
                                        const ScanThresholds& thresholds) {
    std::vector<cplx> lambdas;
    lambdas.reserve(preimages.size());
    for (const cplx& z : preimages) {
        if (!(z.imag() > strip.a_min && z.imag() < strip.a_max)) {
            throw PreconditionError("preimage Im z = " + fmt(z.imag()) +
                                    " is not inside the strip interior");
        }
        lambdas.push_back(symbol(z));
    }
    InclusionReport rep = inclusion_scan(op, weight, spacing, n_schedule, lambdas, thresholds);
    for (std::size_t i = 0; i < preimages.size(); ++i) rep.samples[i].preimage = preimages[i];
    return rep;
}

std::vector<cplx> strip_preimages(int count, double xi_lo, double xi_hi, double a_lo, double a_hi) {
    if (count < 1) throw PreconditionError("need at least one preimage");
    if (xi_hi < xi_lo || a_hi < a_lo) throw PreconditionError("empty preimage box");
    // R2 sequence (plastic number)
    constexpr double g = 1.32471795724474602596;
    constexpr double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    std::vector<cplx> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double u = std::fmod(0.5 + a1 * (i + 1), 1.0);
        const double v = std::fmod(0.5 + a2 * (i + 1), 1.0);
        out.emplace_back(xi_lo + u * (xi_hi - xi_lo), a_lo + v * (a_hi - a_lo));
    }
    return out;
}

}  // namespace whlab
