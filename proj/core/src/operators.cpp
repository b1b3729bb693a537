#include "whlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft_convolve.hpp"
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

int shift_steps(double t, const Grid& grid) {
    const int k = grid.steps(t);
    if (k < 1) throw PreconditionError("shift length must be at least one grid step");
    return k;
}

void check_kernel_spacing(const Kernel& k, const Grid& grid) {
    if (std::abs(k.spacing() - grid.spacing()) > 1e-12 * grid.spacing()) {
        std::ostringstream os;
        os << "kernel spacing " << k.spacing() << " differs from grid spacing " << grid.spacing();
        throw PreconditionError(os.str());
    }
}

Eigen::VectorXcd convolve_direct(const Kernel& k, const Eigen::VectorXcd& f, double h) {
    const int n = static_cast<int>(f.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (int d = k.first_offset(); d <= k.last_offset(); ++d) {
            const int j = i - d;
            if (j >= 0 && j < n) acc += k.at_offset(d) * f[j];
        }
        out[i] = h * acc;
    }
    return out;
}

Eigen::VectorXcd convolve_fft(const Kernel& k, const Eigen::VectorXcd& f, double h) {
    const int n = static_cast<int>(f.size());
    const Eigen::VectorXcd full = detail::linear_convolve_fft(k.samples(), f);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int idx = i - k.first_offset();
        if (idx >= 0 && idx < full.size()) out[i] = h * full[idx];
    }
    return out;
}

bool mass_beyond(const Eigen::VectorXcd& f, int from) {
    for (int j = std::max(from, 0); j < f.size(); ++j) {
        if (f[j] != cplx(0.0)) return true;
    }
    return false;
}

Applied apply_impl(const OperatorSpec& spec, const GridFunction& f, ConvolutionMethod method) {
    const Grid& grid = f.grid();
    const int n = grid.count();
    const auto& s = f.samples();
    return std::visit(
        overloaded{
            [&](const RightShift& op) -> Applied {
                const int k = shift_steps(op.t, grid);
                Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
                if (k < n) out.tail(n - k) = s.head(n - k);
                return {f.with_samples(std::move(out)), mass_beyond(s, n - k)};
            },
            [&](const LeftShift& op) -> Applied {
                const int k = shift_steps(op.t, grid);
                Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
                if (k < n) out.head(n - k) = s.tail(n - k);
                return {f.with_samples(std::move(out)), false};
            },
            [&](const Convolution& op) -> Applied {
                check_kernel_spacing(op.kernel, grid);
                const bool use_fft =
                    method == ConvolutionMethod::Fft ||
                    (method == ConvolutionMethod::Auto && op.kernel.size() > kDirectConvolutionMaxSupport);
                Eigen::VectorXcd out = use_fft ? convolve_fft(op.kernel, s, grid.spacing())
                                               : convolve_direct(op.kernel, s, grid.spacing());
                const bool lost = op.kernel.last_offset() > 0 && mass_beyond(s, n - op.kernel.last_offset());
                return {f.with_samples(std::move(out)), lost};
            },
            [&](const LinearCombo& op) -> Applied {
                Applied acc{GridFunction::zeros(grid, f.weight()), false};
                for (const auto& term : op.terms) {
                    Applied part = apply_impl(term.op, f, method);
                    acc.value.samples() += term.coefficient * part.value.samples();
                    acc.window_truncated = acc.window_truncated || part.window_truncated;
                }
                return acc;
            },
        },
        spec.variant);
}

void assemble_into(Eigen::MatrixXcd& m, cplx coef, const OperatorSpec& spec, const Grid& grid,
                   const Weight& weight) {
    const int n = grid.count();
    std::visit(overloaded{
                   [&](const RightShift& op) {
                       const int k = shift_steps(op.t, grid);
                       for (int j = k; j < n; ++j) {
                           m(j, j - k) += coef * weight.ratio(grid.node(j), grid.node(j - k));
                       }
                   },
                   [&](const LeftShift& op) {
                       const int k = shift_steps(op.t, grid);
                       for (int j = 0; j + k < n; ++j) {
                           m(j, j + k) += coef * weight.ratio(grid.node(j), grid.node(j + k));
                       }
                   },
                   [&](const Convolution& op) {
                       check_kernel_spacing(op.kernel, grid);
                       const double h = grid.spacing();
                       for (int i = 0; i < n; ++i) {
                           const int j_lo = std::max(0, i - op.kernel.last_offset());
                           const int j_hi = std::min(n - 1, i - op.kernel.first_offset());
                           for (int j = j_lo; j <= j_hi; ++j) {
                               const cplx phi = op.kernel.at_offset(i - j);
                               if (phi == cplx(0.0)) continue;
                               m(i, j) += coef * h * phi * weight.ratio(grid.node(i), grid.node(j));
                           }
                       }
                   },
                   [&](const LinearCombo& op) {
                       for (const auto& term : op.terms) {
                           assemble_into(m, coef * term.coefficient, term.op, grid, weight);
                       }
                   },
               },
               spec.variant);
}

}  // namespace

const char* to_string(Side side) noexcept { return side == Side::Right ? "right" : "left"; }

OperatorSpec OperatorSpec::combo(std::vector<ComboTerm> terms) {
    return {LinearCombo{std::move(terms)}};
}

double OperatorSpec::reach() const {
    return std::visit(overloaded{
                          [](const RightShift& op) { return op.t; },
                          [](const LeftShift&) { return 0.0; },
                          [](const Convolution& op) { return op.kernel.reach(); },
                          [](const LinearCombo& op) {
                              double r = 0.0;
                              for (const auto& t : op.terms) r = std::max(r, t.op.reach());
                              return r;
                          },
                      },
                      variant);
}

std::string OperatorSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const RightShift& op) { os << "RightShift(t=" << op.t << ")"; },
                   [&](const LeftShift& op) { os << "LeftShift(t=" << op.t << ")"; },
                   [&](const Convolution& op) {
                       os << "Convolution(support=[" << op.kernel.support_lo() << ", "
                          << op.kernel.support_hi() << "])";
                   },
                   [&](const LinearCombo& op) {
                       os << "LinearCombo(";
                       for (std::size_t i = 0; i < op.terms.size(); ++i) {
                           if (i) os << " + ";
                           const cplx c = op.terms[i].coefficient;
                           os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
                              << "i)*" << op.terms[i].op.describe();
                       }
                       os << ')';
                   },
               },
               variant);
    return os.str();
}

void validate(const OperatorSpec& spec, const Grid& grid) {
    std::visit(overloaded{
                   [&](const RightShift& op) { shift_steps(op.t, grid); },
                   [&](const LeftShift& op) { shift_steps(op.t, grid); },
                   [&](const Convolution& op) { check_kernel_spacing(op.kernel, grid); },
                   [&](const LinearCombo& op) {
                       if (op.terms.empty()) throw PreconditionError("empty linear combination");
                       for (const auto& t : op.terms) validate(t.op, grid);
                   },
               },
               spec.variant);
}

Applied apply_tracked(const OperatorSpec& spec, const GridFunction& f, ConvolutionMethod method) {
    validate(spec, f.grid());
    return apply_impl(spec, f, method);
}

GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& f,
                            ConvolutionMethod method) {
    return apply_tracked(spec, f, method).value;
}

GridFunction MatrixOperator::apply(const GridFunction& f) const {
    if (!(f.grid() == grid) || !(f.weight() == weight)) {
        throw PreconditionError("grid function does not match the operator's grid/weight");
    }
    return from_isometric({matrix * to_isometric(f).values}, grid, weight);
}

MatrixOperator assemble_matrix(const OperatorSpec& spec, const Grid& grid, const Weight& weight,
                               bool allow_large) {
    if (grid.count() > kDefaultMatrixGuard && !allow_large) {
        throw PreconditionError("dense assembly with N = " + std::to_string(grid.count()) +
                                " exceeds the guard of " + std::to_string(kDefaultMatrixGuard) +
                                "; pass the override flag");
    }
    validate(spec, grid);
    MatrixOperator out{Eigen::MatrixXcd::Zero(grid.count(), grid.count()), grid, weight,
                       spec.describe() + " on " + weight.name()};
    assemble_into(out.matrix, 1.0, spec, grid, weight);
    return out;
}

double operator_norm(const MatrixOperator& m) { return linalg::largest_singular_value(m.matrix); }

double exact_shift_norm(Side side, double t, const Grid& grid, const Weight& weight) {
    const int k = shift_steps(t, grid);
    double best = 0.0;
    for (int j = 0; j + k < grid.count(); ++j) {
        const double r = side == Side::Right ? weight.ratio(grid.node(j + k), grid.node(j))
                                             : weight.ratio(grid.node(j), grid.node(j + k));
        best = std::max(best, r);
    }
    return best;
}

LinearAction action_of(const OperatorSpec& spec) {
    return [spec](const GridFunction& f) { return apply_operator(spec, f); };
}

LinearAction action_of(const MatrixOperator& m) {
    return [&m](const GridFunction& f) { return m.apply(f); };
}

void require_interior(std::span<const GridFunction> tests, double t, double reach,
                      double margin) {
    if (tests.empty()) throw PreconditionError("test set is empty");
    for (const auto& f : tests) {
        const int last = f.last_support_index();
        if (last < 0) throw PreconditionError("test set contains the zero function");
        const double limit = f.grid().extent() - t - reach - margin;
        if (f.grid().node(last) > limit + 1e-12) {
            std::ostringstream os;
            os << "test function supported up to x = " << f.grid().node(last)
               << ", beyond the interior limit " << limit << " (X - t - reach - margin)";
            throw PreconditionError(os.str());
        }
    }
}

double wiener_hopf_defect(const LinearAction& op, double reach, double t,
                          std::span<const GridFunction> tests, double margin) {
    require_interior(tests, t, reach, margin);
    const auto right = OperatorSpec::right_shift(t);
    const auto left = OperatorSpec::left_shift(t);
    double worst = 0.0;
    for (const auto& f : tests) {
        const GridFunction sandwiched = apply_operator(left, op(apply_operator(right, f)));
        worst = std::max(worst, weighted_norm(sandwiched - op(f)) / weighted_norm(f));
    }
    return worst;
}

double wiener_hopf_defect(const OperatorSpec& spec, double t,
                          std::span<const GridFunction> tests, double margin) {
    return wiener_hopf_defect(action_of(spec), spec.reach(), t, tests, margin);
}

double wiener_hopf_defect(const MatrixOperator& m, double t, std::span<const GridFunction> tests,
                          double reach, double margin) {
    return wiener_hopf_defect(action_of(m), reach, t, tests, margin);
}

double commutator_defect(const LinearAction& op, double reach, double t, Side side,
                         std::span<const GridFunction> tests, double margin) {
    require_interior(tests, t, reach, margin);
    const auto shift = side == Side::Right ? OperatorSpec::right_shift(t) : OperatorSpec::left_shift(t);
    double worst = 0.0;
    for (const auto& f : tests) {
        const GridFunction lhs = op(apply_operator(shift, f));
        const GridFunction rhs = apply_operator(shift, op(f));
        worst = std::max(worst, weighted_norm(lhs - rhs) / weighted_norm(f));
    }
    return worst;
}

double commutator_defect(const OperatorSpec& spec, double t, Side side,
                         std::span<const GridFunction> tests, double margin) {
    return commutator_defect(action_of(spec), spec.reach(), t, side, tests, margin);
}

}  // namespace whlab
