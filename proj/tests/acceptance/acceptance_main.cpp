// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything holds).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "whlab/spectra.hpp"
#include "whlab/symbols.hpp"

using namespace whlab;

namespace {

// pinned tolerances
constexpr double kNormIdentityTol = 1e-10;
constexpr double kExactOrderTol = 1e-6;
constexpr double kPolynomialOrderTol = 0.05;
constexpr double kOrderSumFloor = -0.02;
constexpr double kCircularTol = 1e-10;
constexpr double kCommutatorZero = 1e-10;
constexpr double kCommutatorGap = 0.05;
constexpr double kWienerHopfTol = 1e-12;
constexpr double kSymbolSlack = 0.05;
constexpr double kConventionTol = 1e-12;
constexpr double kQuasimodeResidual = 0.15;
constexpr double kQuasimodeSlack = 0.10;
constexpr double kOutOfBand = 0.02;
constexpr double kInclusionFraction = 0.95;

constexpr double kPi = 3.14159265358979323846;
constexpr double kScanSpacing = 0.25;
const std::vector<int> kSchedule = {100, 200, 400};
const Grid kGrid(20.0, 400);

struct Outcome {
    bool pass = false;
    std::string summary;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<double> t_range(double lo, double hi, double step) {
    std::vector<double> v;
    for (double t = lo; t <= hi + 1e-9; t += step) v.push_back(t);
    return v;
}

double alpha(Side side, const Weight& w, const Grid& g = kGrid) {
    const auto ts = t_range(1.0, 10.0, 1.0);
    return growth_order(side, w, g, ts).alpha_hat;
}

MatrixOperator shift_matrix(Side side, double t, const Grid& g, const Weight& w) {
    return assemble_matrix(side == Side::Right ? OperatorSpec::right_shift(t)
                                               : OperatorSpec::left_shift(t),
                           g, w);
}

Outcome norm_identity() {
    double worst = 0.0;
    for (const auto& w : builtin_weights()) {
        for (double t : {kGrid.spacing(), 1.0, 2.0}) {
            const int k = kGrid.steps(t);
            double right = 0.0, left = 0.0;
            for (int j = k; j < kGrid.count(); ++j) {
                right = std::max(right, w(kGrid.node(j)) / w(kGrid.node(j - k)));
                left = std::max(left, w(kGrid.node(j - k)) / w(kGrid.node(j)));
            }
            worst = std::max(worst, std::abs(operator_norm(shift_matrix(Side::Right, t, kGrid, w)) - right));
            worst = std::max(worst, std::abs(operator_norm(shift_matrix(Side::Left, t, kGrid, w)) - left));
        }
    }
    return {worst <= kNormIdentityTol, "max |svd norm - ratio max| = " + fmt(worst)};
}

Outcome ground_orders() {
    const double e0 = alpha(Side::Right, Weight::exponential(1.0));
    const double e1 = alpha(Side::Left, Weight::exponential(1.0));
    const double m0 = alpha(Side::Right, Weight::exponential(-1.0));
    const double m1 = alpha(Side::Left, Weight::exponential(-1.0));
    bool ok = std::abs(e0 - 1) <= kExactOrderTol && std::abs(e1 + 1) <= kExactOrderTol &&
              std::abs(m0 + 1) <= kExactOrderTol && std::abs(m1 - 1) <= kExactOrderTol &&
              std::abs(e0 + e1) <= kExactOrderTol && std::abs(m0 + m1) <= kExactOrderTol;

    const Grid wide(200.0, 4000);
    const auto late = t_range(50.0, 100.0, 5.0);
    const double p0 = growth_order(Side::Right, Weight::polynomial(2.0), wide, late).alpha_hat;
    const double p1 = growth_order(Side::Left, Weight::polynomial(2.0), wide, late).alpha_hat;
    ok = ok && std::abs(p0) <= kPolynomialOrderTol && std::abs(p1) <= kPolynomialOrderTol;

    double min_sum = INFINITY;
    const auto ts = t_range(10.0, 100.0, 10.0);
    for (const auto& w : builtin_weights()) {
        const double s = growth_order(Side::Right, w, wide, ts).alpha_hat +
                         growth_order(Side::Left, w, wide, ts).alpha_hat;
        min_sum = std::min(min_sum, s);
    }
    ok = ok && min_sum >= kOrderSumFloor;
    return {ok, "e^x (" + fmt(e0) + ", " + fmt(e1) + "), e^-x (" + fmt(m0) + ", " + fmt(m1) +
                    "), (1+x)^2 (" + fmt(p0) + ", " + fmt(p1) + "), min sum " + fmt(min_sum)};
}

Outcome disk(Side side, const std::vector<Weight>& weights) {
    bool ok = true;
    std::string summary;
    for (const auto& w : weights) {
        const double radius = std::exp(alpha(side, w));
        auto samples = disk_nodes(25, 0.9 * radius);
        const auto outer = annulus_nodes(25, 1.1 * radius, 2.0 * radius);
        samples.insert(samples.end(), outer.begin(), outer.end());
        const auto op = side == Side::Right ? OperatorSpec::right_shift(1.0) : OperatorSpec::left_shift(1.0);
        const auto rep = disk_scan(op, w, kScanSpacing, kSchedule, radius, samples);
        ok = ok && rep.passed() && rep.inside_total == 25 && rep.outside_total == 25;
        if (!summary.empty()) summary += "; ";
        summary += w.name() + ": R=" + fmt(radius) + " inside " + std::to_string(rep.inside_passed) +
                   "/25 outside " + std::to_string(rep.outside_passed) + "/25";
    }
    return {ok, summary};
}

Outcome circular_symmetry() {
    double worst = 0.0;
    for (const auto& w : builtin_weights())
        for (Side side : {Side::Right, Side::Left}) {
            const auto m = shift_matrix(side, 1.0, kGrid, w);
            for (double r : {0.5, 1.5}) {
                std::vector<cplx> nodes = {r};
                for (double th : {kPi / 7, 1.0, 2.5}) nodes.push_back(std::polar(r, th));
                const auto ps = pseudospectrum(m, nodes);
                for (std::size_t i = 1; i < nodes.size(); ++i)
                    worst = std::max(worst, std::abs(ps.sigma_min[i] - ps.sigma_min[0]));
            }
        }
    return {worst <= kCircularTol, "max |sigma(r e^{i theta}) - sigma(r)| = " + fmt(worst)};
}

Outcome defects() {
    const auto w = Weight::constant();
    const double h = kGrid.spacing();
    const std::vector<GridFunction> indicator = {GridFunction::indicator(kGrid, w, 0.0, 1.0)};
    std::vector<GridFunction> interior = indicator;
    interior.push_back(GridFunction::indicator(kGrid, w, 0.5, 10.0));
    interior.push_back(GridFunction::sample(kGrid, w, [](double x) {
        return x <= 15.0 ? std::exp(-(x - 6) * (x - 6) / 4) * std::exp(cplx(0.0, 0.3 * x * x)) : 0.0;
    }));

    const auto plus = OperatorSpec::convolution(Kernel::gaussian_bump(1.0, 0.5, h));
    const auto minus = OperatorSpec::convolution(Kernel::gaussian_bump(-1.0, 0.5, h));
    const double pr = commutator_defect(plus, 1.0, Side::Right, interior);
    const double pl = commutator_defect(plus, 1.0, Side::Left, indicator);
    const double mr = commutator_defect(minus, 1.0, Side::Right, indicator);
    const double ml = commutator_defect(minus, 1.0, Side::Left, interior);
    const auto combo = OperatorSpec::combo(
        {{cplx(2.0), OperatorSpec::left_shift(1.0)}, {cplx(0.0, 3.0), OperatorSpec::right_shift(1.0)}});
    const double wh = wiener_hopf_defect(combo, 1.0, interior);
    const bool ok = pr <= kCommutatorZero && pl >= kCommutatorGap && mr >= kCommutatorGap &&
                    ml <= kCommutatorZero && wh <= kWienerHopfTol;
    return {ok, "R+: [S,T]=" + fmt(pr) + " [L,T]=" + fmt(pl) + "; R-: [S,T]=" + fmt(mr) +
                    " [L,T]=" + fmt(ml) + "; combination WH=" + fmt(wh)};
}

Outcome symbol_bound() {
    const double h = kGrid.spacing();
    const Kernel bump = Kernel::gaussian_bump(0.0, 1.0, h);
    const std::vector<std::pair<std::string, Kernel>> kernels = {
        {"bump", bump},
        {"shifted bump", bump.shifted(1.0)},
        {"difference", bump - Kernel::gaussian_bump(0.5, 1.0, h)}};
    bool ok = true;
    double worst_ratio = 0.0;
    int lines = 0;
    for (const auto& w : builtin_weights()) {
        const auto ts = t_range(1.0, 10.0, 1.0);
        const auto strip = StripSpec::measured(growth_order(Side::Right, w, kGrid, ts),
                                               growth_order(Side::Left, w, kGrid, ts));
        const std::vector<double> a = {strip.a_min, 0.5 * (strip.a_min + strip.a_max), strip.a_max};
        for (const auto& [name, k] : kernels) {
            const auto m = assemble_matrix(OperatorSpec::convolution(k), kGrid, w);
            const auto rep = symbol_bound_check(m, SymbolFunction::kernel(k), strip, a, kSymbolSlack);
            ok = ok && rep.pass;
            for (const auto& l : rep.lines) worst_ratio = std::max(worst_ratio, l.ratio_to_norm);
            lines += static_cast<int>(rep.lines.size());
        }
    }
    double conv = 0.0;
    const Kernel delta = Kernel::delta(1.0, h);
    const auto xi = t_range(-10.0, 10.0, 0.1);
    for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const auto vals = convolution_symbol(delta, a, xi);
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const cplx ref = shift_symbol(1.0, Side::Right, cplx(xi[i], a));
            conv = std::max(conv, std::abs(vals[i] - ref) / std::abs(ref));
        }
    }
    ok = ok && conv <= kConventionTol;
    return {ok, std::to_string(lines) + " lines, max |h_a|/||T|| = " + fmt(worst_ratio) +
                    ", convention residual " + fmt(conv)};
}

Outcome quasimode() {
    const auto w = Weight::constant();
    const Grid g(40.0, 800);
    const auto ts = t_range(1.0, 10.0, 1.0);
    const auto strip = StripSpec::measured(growth_order(Side::Right, w, g, ts),
                                           growth_order(Side::Left, w, g, ts));
    QuasimodeParams shift_p;
    shift_p.eta0 = kPi;
    const auto s = quasimode_schedule(OperatorSpec::right_shift(1.0), w, shift_p, g, 2, strip,
                                      kQuasimodeSlack);
    const Kernel bump = Kernel::gaussian_bump(0.0, 1.0, g.spacing());
    const auto k = quasimode_schedule(OperatorSpec::convolution(bump), w, QuasimodeParams{}, g, 2,
                                      strip, kQuasimodeSlack);

    const Eigen::VectorXcd F = wave_packet(g, w, kPi, 0.25, 10.0)
                                   .samples()
                                   .cwiseProduct(cutoff_window(g, w, 10.0).samples());
    const double oob = out_of_band_fraction(F, g, kPi, 1.0);

    const double rs = s.levels[0].residual_ratio, rk = k.levels[0].residual_ratio;
    const bool ok = rs <= kQuasimodeResidual && rk <= kQuasimodeResidual && s.non_increasing &&
                    k.non_increasing && oob <= kOutOfBand;
    return {ok, "S_1 residual " + fmt(rs) + " -> " + fmt(s.levels[1].residual_ratio) +
                    ", bump residual " + fmt(rk) + " -> " + fmt(k.levels[1].residual_ratio) +
                    ", out-of-band " + fmt(oob) + " (bound " + fmt(kQuasimodeResidual) + ")"};
}

Outcome inclusion() {
    struct Case {
        Side side;
        Weight weight;
    };
    const std::vector<Case> cases = {{Side::Right, Weight::constant()},
                                     {Side::Right, Weight::exponential(1.0)},
                                     {Side::Left, Weight::exponential(-1.0)}};
    bool ok = true;
    std::string summary;
    const auto ts = t_range(1.0, 10.0, 1.0);
    for (const auto& c : cases) {
        const auto est = growth_order(c.side, c.weight, kGrid, ts);
        const bool right = c.side == Side::Right;
        const auto strip = right ? StripSpec::half_plane_o(est) : StripSpec::half_plane_v(est);
        // images with |lambda| <= 0.9 e^{alpha}
        const double edge = right ? strip.a_max + std::log(0.9) : strip.a_min - std::log(0.9);
        const auto pre = right ? strip_preimages(50, -kPi, kPi, edge - 2.0, edge)
                               : strip_preimages(50, -kPi, kPi, edge, edge + 2.0);
        const auto op = right ? OperatorSpec::right_shift(1.0) : OperatorSpec::left_shift(1.0);
        const auto rep = spectrum_inclusion_scan(op, c.weight, SymbolFunction::shift(1.0, c.side),
                                                 strip, pre, kScanSpacing, kSchedule);
        ok = ok && rep.consistent_fraction >= kInclusionFraction;
        if (!summary.empty()) summary += "; ";
        summary += std::string(right ? "S_1 " : "left shift ") + c.weight.name() + " " +
                   fmt(rep.consistent_fraction);
    }
    return {ok, summary};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "whlab-acceptance-determinism";
    fs::remove_all(dir);
    auto run_once = [&]() -> std::string {
        std::ostringstream out, err;
        const int code = cli::run_command({"whlab", "verify-all", "-o", dir.string()}, out, err);
        if (code == 1) return "error: " + err.str();
        std::ifstream in(dir / "report.json", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string first = run_once();
    const std::string second = run_once();
    const bool ok = !first.empty() && first.rfind("error:", 0) != 0 && first == second;
    return {ok, ok ? std::to_string(first.size()) + " bytes, identical"
                   : "reports differ or the run failed"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact shift norm identity", norm_identity},
        {"ground orders", ground_orders},
        {"disk spectrum of the right shift",
         [] { return disk(Side::Right, {Weight::constant(), Weight::exponential(1.0)}); }},
        {"disk spectrum of the left shift",
         [] { return disk(Side::Left, {Weight::exponential(-1.0)}); }},
        {"circular symmetry", circular_symmetry},
        {"Wiener-Hopf and commutation defects", defects},
        {"symbol bound and convention", symbol_bound},
        {"quasimode residuals", quasimode},
        {"symbol-range inclusion", inclusion},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("criterion %2zu: %s  %s  [%s] (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), o.summary.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
