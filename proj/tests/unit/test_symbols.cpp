#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "whlab/errors.hpp"
#include "whlab/symbols.hpp"

using namespace whlab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Grid kGrid(20.0, 400);
const Grid kWide(40.0, 800);

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

GrowthEstimate fake_growth(Side side, double alpha) {
    GrowthEstimate g;
    g.side = side;
    g.alpha_hat = alpha;
    g.t_values = {1, 2, 3};
    return g;
}

StripSpec measured_strip(const Weight& w, const Grid& g) {
    const std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return StripSpec::measured(growth_order(Side::Right, w, g, ts),
                               growth_order(Side::Left, w, g, ts));
}

}  // namespace

TEST(Symbols, ShiftSymbolValues) {
    EXPECT_NEAR(std::abs(shift_symbol(1.0, Side::Right, 0.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(shift_symbol(1.0, Side::Right, kPi) - (-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(shift_symbol(1.0, Side::Right, cplx(0.0, 1.0))), std::exp(1.0), 1e-15);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 50; ++i) {
        const cplx z(u(rng), u(rng));
        const double t = 0.5 + std::abs(u(rng));
        EXPECT_NEAR(std::abs(shift_symbol(t, Side::Right, z)), std::exp(t * z.imag()),
                    1e-14 * std::exp(t * z.imag()));
        EXPECT_NEAR(std::abs(shift_symbol(t, Side::Right, z) -
                             std::exp(cplx(0.0, -1.0) * t * z)),
                    0.0, 1e-13 * std::exp(t * z.imag()));
        EXPECT_NEAR(std::abs(shift_symbol(t, Side::Left, z) - std::exp(cplx(0.0, 1.0) * t * z)),
                    0.0, 1e-13 * std::exp(-t * z.imag()));
    }
}

TEST(Symbols, ShiftSymbolAtGrowthOrderGivesSpectralRadius) {
    const std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto r = growth_order(Side::Right, Weight::exponential(1.0), kGrid, ts);
    const auto s = SymbolFunction::shift(1.0, Side::Right);
    for (double xi : linspace(-kPi, kPi, 9))
        EXPECT_NEAR(std::abs(s.on_line(r.alpha_hat, xi)), std::exp(1.0), 1e-8);
}

TEST(Symbols, GaussianTransform) {
    const Kernel k = Kernel::gaussian(1.0, 0.0, 8.0, kGrid.spacing());
    const auto xi = linspace(-6.0, 6.0, 241);
    const auto h = convolution_symbol(k, 0.0, xi);
    for (std::size_t i = 0; i < xi.size(); ++i)
        EXPECT_NEAR(std::abs(h[i] - std::exp(-xi[i] * xi[i] / 2)), 0.0, 1e-8) << "xi=" << xi[i];

    const auto hs = convolution_symbol(k.shifted(1.0), 0.0, xi);
    for (std::size_t i = 0; i < xi.size(); ++i)
        EXPECT_NEAR(std::abs(hs[i] - h[i] * std::exp(cplx(0.0, -xi[i]))), 0.0, 1e-12);
}

TEST(Symbols, DeltaKernelLocksTheConvention) {
    const Kernel d = Kernel::delta(1.0, kGrid.spacing());
    const auto xi = linspace(-10.0, 10.0, 101);
    for (double a : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
        const auto h = convolution_symbol(d, a, xi);
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const cplx ref = shift_symbol(1.0, Side::Right, cplx(xi[i], a));
            EXPECT_LE(std::abs(h[i] - ref), 1e-12 * std::abs(ref)) << "a=" << a << " xi=" << xi[i];
            EXPECT_LE(std::abs(h[i] - std::exp(a) * std::exp(cplx(0.0, -xi[i]))), 1e-12 * std::exp(a));
        }
    }
}

TEST(Symbols, KernelTransformMatchesQuadratureOracle) {
    const double c = 0.3, w = 12.0;
    const Kernel k = Kernel::gaussian(1.0, c, w, kGrid.spacing());
    auto phi = [](double s) {
        const double d = s - 0.3;
        return std::exp(-d * d / 2) / std::sqrt(2 * kPi);
    };
    const auto sym = SymbolFunction::kernel(k);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> xi_d(-4, 4), a_d(-1, 1);
    for (int i = 0; i < 10; ++i) {
        const cplx z(xi_d(rng), a_d(rng));
        const cplx ref = oracle::simpson(
            [&](double s) { return phi(s) * std::exp(cplx(0.0, -1.0) * z * s); }, c - w, c + w,
            24000);
        EXPECT_LE(std::abs(sym(z) - ref), 1e-8 * std::max(1.0, std::abs(ref))) << "z=" << z;
    }
}

TEST(Symbols, ConvolutionSymbolIsLinear) {
    const double h = kGrid.spacing();
    const Kernel k1 = Kernel::gaussian_bump(0.0, 1.0, h);
    const Kernel k2 = Kernel::gaussian_bump(0.5, 1.5, h);
    const cplx alpha(0.7, -1.2), beta(-2.0, 0.25);
    const auto xi = linspace(-8.0, 8.0, 81);
    for (double a : {-0.5, 0.0, 0.5}) {
        const auto lhs = convolution_symbol(alpha * k1 + beta * k2, a, xi);
        const auto s1 = convolution_symbol(k1, a, xi);
        const auto s2 = convolution_symbol(k2, a, xi);
        for (std::size_t i = 0; i < xi.size(); ++i)
            EXPECT_LE(std::abs(lhs[i] - (alpha * s1[i] + beta * s2[i])), 1e-12);
    }
}

TEST(Symbols, TiltOverflowIsRejected) {
    const Kernel k = Kernel::gaussian(1.0, 0.0, 8.0, kGrid.spacing());
    EXPECT_NO_THROW(check_tilt(k, 0.0));
    try {
        check_tilt(k, 2.0);
        FAIL() << "expected TiltOverflowError";
    } catch (const TiltOverflowError& e) {
        EXPECT_EQ(e.tilt(), 2.0);
    }
    const std::vector<double> xi = {0.0};
    EXPECT_THROW(convolution_symbol(k, -3.0, xi), TiltOverflowError);
}

TEST(Symbols, SymbolOfCombination) {
    const auto spec = OperatorSpec::combo(
        {{cplx(2.0), OperatorSpec::left_shift(1.0)}, {cplx(0.0, 3.0), OperatorSpec::right_shift(1.0)}});
    const auto s = SymbolFunction::of(spec);
    EXPECT_FALSE(s.is_pure_shift());
    EXPECT_TRUE(SymbolFunction::of(OperatorSpec::left_shift(2.0)).is_pure_shift());
    for (cplx z : {cplx(0.3, 0.1), cplx(-2.0, -0.7)}) {
        const cplx ref = 2.0 * std::exp(cplx(0, 1) * z) + cplx(0, 3) * std::exp(cplx(0, -1) * z);
        EXPECT_LE(std::abs(s(z) - ref), 1e-14 * std::abs(ref));
    }
    EXPECT_FALSE(SymbolFunction::kernel(Kernel::gaussian_bump(0, 1, 0.05)).is_pure_shift());
}

TEST(Symbols, CauchyRiemannResidualIsSmallForHolomorphicSymbols) {
    const auto shift = SymbolFunction::shift(1.0, Side::Right);
    const auto bump = SymbolFunction::kernel(Kernel::gaussian_bump(0.0, 1.0, 0.05));
    for (double xi : {-2.3, -0.6, 0.45, 1.7})
        for (double a : {-0.5, 0.0, 0.5}) {
            EXPECT_LE(cauchy_riemann_residual(shift, a, xi), 1e-4);
            EXPECT_LE(cauchy_riemann_residual(bump, a, xi), 1e-4);
        }
}

TEST(Strip, MeasuredAndHalfPlanes) {
    const auto s = measured_strip(Weight::exponential(1.0), kGrid);
    EXPECT_NEAR(s.a_min, 1.0, 1e-9);
    EXPECT_NEAR(s.a_max, 1.0, 1e-9);
    EXPECT_FALSE(s.provenance.empty());
    const auto c = measured_strip(Weight::constant(), kGrid);
    EXPECT_EQ(c.a_min, 0.0);
    EXPECT_EQ(c.a_max, 0.0);

    // alpha0 + alpha1 slightly negative collapses to the midpoint, clearly negative is an error
    const auto tight = StripSpec::measured(fake_growth(Side::Right, 0.0), fake_growth(Side::Left, -0.01));
    EXPECT_NEAR(tight.a_min, 0.005, 1e-15);
    EXPECT_LE(tight.a_min, tight.a_max);
    EXPECT_THROW(StripSpec::measured(fake_growth(Side::Right, 0.0), fake_growth(Side::Left, -0.5)),
                 PreconditionError);

    const auto o = StripSpec::half_plane_o(fake_growth(Side::Right, 0.4));
    EXPECT_TRUE(o.contains(-100.0));
    EXPECT_FALSE(o.contains(0.5));
    const auto v = StripSpec::half_plane_v(fake_growth(Side::Left, 0.4));
    EXPECT_TRUE(v.contains(100.0));
    EXPECT_FALSE(v.contains(-0.5));
}

TEST(SymbolBound, GaussianBumpOnUnweightedSpace) {
    const auto w = Weight::constant();
    const Kernel k = Kernel::gaussian_bump(0.0, 1.0, kGrid.spacing());
    const auto m = assemble_matrix(OperatorSpec::convolution(k), kGrid, w);
    const std::vector<double> a = {0.0};
    const auto rep = symbol_bound_check(m, SymbolFunction::kernel(k), measured_strip(w, kGrid), a);
    ASSERT_EQ(rep.lines.size(), 1u);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.cr_ok);
    EXPECT_NEAR(rep.lines[0].max_abs, 1.0, 1e-3);
    EXPECT_LE(rep.lines[0].ratio_to_norm, 1.05);
    EXPECT_NEAR(rep.operator_norm, operator_norm(m), 1e-14);
}

TEST(SymbolBound, ShiftEqualityCase) {
    const auto w = Weight::exponential(1.0);
    const auto m = assemble_matrix(OperatorSpec::right_shift(1.0), kGrid, w);
    const std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto strip = StripSpec::half_plane_o(growth_order(Side::Right, w, kGrid, ts));
    const std::vector<double> a = {1.0};
    const auto rep = symbol_bound_check(m, SymbolFunction::shift(1.0, Side::Right), strip, a);
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.lines[0].max_abs, std::exp(1.0), 1e-12);
    EXPECT_NEAR(rep.lines[0].ratio_to_norm, 1.0, 1e-10);
}

TEST(SymbolBound, RejectsTiltsOutsideTheStrip) {
    const auto w = Weight::constant();
    const Kernel k = Kernel::gaussian_bump(0.0, 1.0, kGrid.spacing());
    const auto m = assemble_matrix(OperatorSpec::convolution(k), kGrid, w);
    const std::vector<double> a = {0.15};
    EXPECT_THROW(symbol_bound_check(m, SymbolFunction::kernel(k), measured_strip(w, kGrid), a),
                 PreconditionError);
}

TEST(Fourier, ParsevalForPackets) {
    for (double eta0 : {0.0, 1.3, kPi}) {
        const auto F = wave_packet(kWide, Weight::constant(), eta0, 0.25, 15.0).samples();
        const double l2 = F.squaredNorm() * kWide.spacing();
        const double nyq = kPi / kWide.spacing();
        const cplx e = oracle::simpson(
            [&](double xi) { return cplx(std::norm(fourier_transform(F, kWide, xi))); }, -nyq, nyq,
            20000);
        EXPECT_NEAR(e.real() / (2 * kPi) / l2, 1.0, 1e-6) << "eta0=" << eta0;
        EXPECT_LE(std::abs(fourier_transform(F, kWide, eta0 + 0.4) -
                           oracle::dtft(F, kWide, eta0 + 0.4)),
                  1e-12 * l2);
    }
}

TEST(Fourier, OutOfBandFractionMatchesQuadrature) {
    const Eigen::VectorXcd F = wave_packet(kWide, Weight::constant(), kPi, 0.25, 10.0)
                                   .samples()
                                   .cwiseProduct(cutoff_window(kWide, Weight::constant(), 10.0).samples());
    const double l2 = F.squaredNorm() * kWide.spacing();
    for (double delta : {0.25, 0.5, 1.0}) {
        const double oob = out_of_band_fraction(F, kWide, kPi, delta);
        const double ref = 1.0 - oracle::band_energy(F, kWide, kPi, delta, 2000) / l2;
        EXPECT_NEAR(oob, ref, 1e-8) << "delta=" << delta;
    }
    EXPECT_LE(out_of_band_fraction(F, kWide, kPi, 1.0), 0.02);
}

TEST(Quasimode, ShiftResidualMatchesDirectEvaluation) {
    const auto w = Weight::constant();
    const auto m = assemble_matrix(OperatorSpec::right_shift(1.0), kWide, w);
    const StripSpec strip = measured_strip(w, kWide);
    QuasimodeParams p;
    p.eta0 = kPi;
    const auto rep = quasimode_witness(m, SymbolFunction::shift(1.0, Side::Right), p, strip);
    EXPECT_NEAR(std::abs(rep.lambda - (-1.0)), 0.0, 1e-15);

    // direct: f = cutoff * packet, residual ||f(. - 1) + f|| / ||f||
    const int n = kWide.count(), k = kWide.steps(1.0);
    Eigen::VectorXcd f(n);
    for (int j = 0; j < n; ++j) {
        const double x = kWide.node(j), d = x - p.t0;
        f[j] = cutoff_profile(x, p.t0) * std::exp(-p.b * p.b * d * d / 2) *
               std::exp(cplx(0.0, d * p.eta0));
    }
    Eigen::VectorXcd r = f;
    for (int j = k; j < n; ++j) r[j] += f[j - k];
    EXPECT_NEAR(rep.residual_ratio, r.norm() / f.norm(), 1e-12);

    // the uncut packet gives sqrt(2 (1 - e^{-b^2/4})); the cutoff can only add to it
    const double packet_floor = std::sqrt(2.0 * (1.0 - std::exp(-p.b * p.b / 4)));
    EXPECT_GE(rep.residual_ratio, packet_floor * (1 - 1e-3));
    EXPECT_LE(rep.residual_ratio, packet_floor + 0.01);

    // at b = 1/4 the only band with |mu - lambda| <= sqrt(eps) is delta = 1/4,
    // and a sixth of the packet energy lies outside it
    EXPECT_FALSE(rep.delta_found);
    EXPECT_FALSE(rep.passed);
    EXPECT_EQ(rep.delta, 0.25);
    EXPECT_GT(rep.out_of_band, p.epsilon);

    const Grid wider(80.0, 1600);
    QuasimodeParams q = p;
    q.b = 0.125;
    q.t0 = 20.0;
    const auto refined = quasimode_witness(assemble_matrix(OperatorSpec::right_shift(1.0), wider, w),
                                           SymbolFunction::shift(1.0, Side::Right), q, strip);
    EXPECT_TRUE(refined.delta_found);
    EXPECT_TRUE(refined.passed);
    EXPECT_LE(refined.out_of_band, q.epsilon);
    EXPECT_LE(refined.sup_in_band, std::sqrt(q.epsilon));
    EXPECT_GE(refined.residual_ratio, std::sqrt(2.0 * (1.0 - std::exp(-q.b * q.b / 4))) * (1 - 1e-3));
}

TEST(Quasimode, BumpConvolutionResidual) {
    const auto w = Weight::constant();
    const Kernel k = Kernel::gaussian_bump(0.0, 1.0, kWide.spacing());
    const auto m = assemble_matrix(OperatorSpec::convolution(k), kWide, w);
    const auto sym = SymbolFunction::kernel(k);
    QuasimodeParams p;
    const auto rep = quasimode_witness(m, sym, p, measured_strip(w, kWide));
    EXPECT_NEAR(std::abs(rep.lambda - sym(0.0)), 0.0, 1e-15);
    EXPECT_LE(rep.residual_ratio, 0.1);
    EXPECT_TRUE(rep.passed);
    EXPECT_LE(rep.out_of_band, p.epsilon);
    EXPECT_LE(rep.sup_in_band, std::sqrt(p.epsilon));
    EXPECT_LE(rep.residual_ratio, rep.witness_tolerance);
}

TEST(Quasimode, RefinementScheduleIsNonIncreasing) {
    const auto w = Weight::constant();
    const StripSpec strip = measured_strip(w, kWide);
    QuasimodeParams shift_p;
    shift_p.eta0 = kPi;
    const auto s = quasimode_schedule(OperatorSpec::right_shift(1.0), w, shift_p, kWide, 2, strip);
    EXPECT_TRUE(s.non_increasing);
    ASSERT_EQ(s.levels.size(), 2u);
    EXPECT_EQ(s.levels[1].params.b, 0.125);
    EXPECT_EQ(s.levels[1].params.t0, 20.0);
    EXPECT_EQ(s.grids[1].count(), 1600);
    EXPECT_LT(s.levels[1].residual_ratio, s.levels[0].residual_ratio);

    const auto k = quasimode_schedule(
        OperatorSpec::convolution(Kernel::gaussian_bump(0.0, 1.0, kWide.spacing())), w,
        QuasimodeParams{}, kWide, 2, strip);
    EXPECT_TRUE(k.non_increasing);
}

TEST(Quasimode, RejectsTiltOutsideStrip) {
    const auto w = Weight::constant();
    const auto m = assemble_matrix(OperatorSpec::right_shift(1.0), kWide, w);
    QuasimodeParams p;
    p.a = 0.5;
    EXPECT_THROW(quasimode_witness(m, SymbolFunction::shift(1.0, Side::Right), p,
                                   measured_strip(w, kWide)),
                 PreconditionError);
}

TEST(Inclusion, UnweightedShiftSymbolImage) {
    const std::vector<int> ns = {100, 200, 400};
    const auto pre = strip_preimages(50, -kPi, kPi, std::log(0.9) - 2.0, std::log(0.9));
    const auto w = Weight::constant();
    const std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto strip = StripSpec::half_plane_o(growth_order(Side::Right, w, kGrid, ts));
    const auto rep = spectrum_inclusion_scan(OperatorSpec::right_shift(1.0), w,
                                             SymbolFunction::shift(1.0, Side::Right), strip, pre,
                                             0.25, ns);
    ASSERT_EQ(rep.samples.size(), 50u);
    for (const auto& s : rep.samples) {
        EXPECT_LE(std::abs(s.lambda), 0.9 + 1e-12);
        EXPECT_EQ(s.verdict, InclusionVerdict::Consistent) << "lambda=" << s.lambda;
    }
    EXPECT_EQ(rep.consistent_fraction, 1.0);
}

TEST(Inclusion, LeftShiftOnDecayingWeight) {
    const std::vector<int> ns = {100, 200, 400};
    const auto w = Weight::exponential(-1.0);
    const std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto strip = StripSpec::half_plane_v(growth_order(Side::Left, w, kGrid, ts));
    const double edge = -1.0 - std::log(0.9);
    const auto pre = strip_preimages(20, -kPi, kPi, edge, edge + 2.0);
    const auto rep = spectrum_inclusion_scan(OperatorSpec::left_shift(1.0), w,
                                             SymbolFunction::shift(1.0, Side::Left), strip, pre,
                                             0.25, ns);
    for (const auto& s : rep.samples) EXPECT_LE(std::abs(s.lambda), 0.9 * std::exp(1.0) + 1e-12);
    EXPECT_GE(rep.consistent_fraction, 0.95);
}

TEST(Inclusion, OutsidePointIsOutsideConsistent) {
    const std::vector<int> ns = {100, 200, 400};
    const std::vector<cplx> lam = {2.0, cplx(0.0, -2.0)};
    const auto rep = inclusion_scan(OperatorSpec::right_shift(1.0), Weight::constant(), 0.25, ns, lam);
    for (const auto& s : rep.samples) {
        EXPECT_EQ(s.verdict, InclusionVerdict::OutsideConsistent);
        for (double v : s.sigma_by_n) EXPECT_GE(v, 1.0 - 1e-12);
    }
}

TEST(Inclusion, PreimagesMustLieInsideTheStrip) {
    const std::vector<int> ns = {100};
    const std::vector<cplx> pre = {cplx(0.0, 0.5)};
    const auto strip = StripSpec::half_plane_o(fake_growth(Side::Right, 0.0));
    EXPECT_THROW(spectrum_inclusion_scan(OperatorSpec::right_shift(1.0), Weight::constant(),
                                         SymbolFunction::shift(1.0, Side::Right), strip, pre, 0.25,
                                         ns),
                 PreconditionError);
}

TEST(Inclusion, PreimagesCoverTheBox) {
    const auto pts = strip_preimages(200, -1.0, 2.0, -3.0, -0.5);
    ASSERT_EQ(pts.size(), 200u);
    int left = 0, low = 0;
    for (cplx z : pts) {
        EXPECT_GE(z.real(), -1.0);
        EXPECT_LE(z.real(), 2.0);
        EXPECT_GE(z.imag(), -3.0);
        EXPECT_LE(z.imag(), -0.5);
        left += z.real() < 0.5;
        low += z.imag() < -1.75;
    }
    EXPECT_NEAR(left / 200.0, 0.5, 0.05);
    EXPECT_NEAR(low / 200.0, 0.5, 0.05);
}
