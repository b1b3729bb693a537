#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "whlab/grid_function.hpp"
#include "whlab/kernel.hpp"

namespace whlab {

enum class Side { Right, Left };

const char* to_string(Side side) noexcept;

/// S_t: (S_t f)(x) = f(x - t) for x >= t, 0 otherwise.
struct RightShift {
    double t = 0.0;
};
/// P+ S_{-t}: (P+ S_{-t} f)(x) = f(x + t).
struct LeftShift {
    double t = 0.0;
};
/// T_phi: f -> P+(phi * f).
struct Convolution {
    Kernel kernel;
};

struct ComboTerm;
struct LinearCombo {
    std::vector<ComboTerm> terms;
};

/// Symbolic description of a shift/convolution operator on the half line.
struct OperatorSpec {
    std::variant<RightShift, LeftShift, Convolution, LinearCombo> variant;

    static OperatorSpec right_shift(double t) { return {RightShift{t}}; }
    static OperatorSpec left_shift(double t) { return {LeftShift{t}}; }
    static OperatorSpec convolution(Kernel k) { return {Convolution{std::move(k)}}; }
    static OperatorSpec combo(std::vector<ComboTerm> terms);

    /// Largest distance the operator moves mass to the right.
    double reach() const;
    std::string describe() const;
};

struct ComboTerm {
    cplx coefficient;
    OperatorSpec op;
};

/// Throws PreconditionError unless every shift is a positive multiple of h and
/// every kernel is sampled at spacing h.
void validate(const OperatorSpec& spec, const Grid& grid);

enum class ConvolutionMethod { Auto, Direct, Fft };

/// Kernels longer than this many samples use the FFT path under Auto.
inline constexpr int kDirectConvolutionMaxSupport = 64;

struct Applied {
    GridFunction value;
    /// Nonzero input mass was pushed past x = X and dropped.
    bool window_truncated = false;
};

Applied apply_tracked(const OperatorSpec& spec, const GridFunction& f,
                      ConvolutionMethod method = ConvolutionMethod::Auto);
GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& f,
                            ConvolutionMethod method = ConvolutionMethod::Auto);

/// Dense N x N realization acting on isometric coordinates.
struct MatrixOperator {
    Eigen::MatrixXcd matrix;
    Grid grid;
    Weight weight;
    std::string provenance;

    GridFunction apply(const GridFunction& f) const;
    int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

inline constexpr int kDefaultMatrixGuard = 4000;

/// Builds M with to_isometric(apply(spec, f)) = M to_isometric(f) for interior f.
/// N > 4000 needs allow_large.
MatrixOperator assemble_matrix(const OperatorSpec& spec, const Grid& grid, const Weight& weight,
                               bool allow_large = false);

/// Largest singular value (full SVD up to N = 1200, power iteration on M*M above).
double operator_norm(const MatrixOperator& m);

/// max over node pairs of the shift ratios: omega(x_j)/omega(x_{j-k}) for the
/// right shift, omega(x_j)/omega(x_{j+k}) for the left shift.
double exact_shift_norm(Side side, double t, const Grid& grid, const Weight& weight);

using LinearAction = std::function<GridFunction(const GridFunction&)>;

LinearAction action_of(const OperatorSpec& spec);
LinearAction action_of(const MatrixOperator& m);

/// Checks that every test function is supported in [0, X - t - reach - margin].
void require_interior(std::span<const GridFunction> tests, double t, double reach, double margin);

/// max over tests of ||P+S_{-t} T S_t f - T f|| / ||f||.
double wiener_hopf_defect(const LinearAction& op, double reach, double t,
                          std::span<const GridFunction> tests, double margin = 0.0);
double wiener_hopf_defect(const OperatorSpec& spec, double t,
                          std::span<const GridFunction> tests, double margin = 0.0);
double wiener_hopf_defect(const MatrixOperator& m, double t,
                          std::span<const GridFunction> tests, double reach = 0.0,
                          double margin = 0.0);

/// max over tests of ||T A f - A T f|| / ||f|| with A = S_t (Right) or P+S_{-t} (Left).
double commutator_defect(const LinearAction& op, double reach, double t, Side side,
                         std::span<const GridFunction> tests, double margin = 0.0);
double commutator_defect(const OperatorSpec& spec, double t, Side side,
                         std::span<const GridFunction> tests, double margin = 0.0);

}  // namespace whlab
