#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "whlab/csv.hpp"
#include "whlab/errors.hpp"
#include "whlab/spectra.hpp"
#include "whlab/symbols.hpp"

namespace whlab::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Context {
    const RunConfig& cfg;
    VerificationReport& report;
    Grid grid;

    void write_artifact(const std::string& name, const std::string& content) {
        const fs::path path = cfg.out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
        if (!out) throw std::runtime_error("failed writing " + path.string());
        if (std::find(report.artifacts.begin(), report.artifacts.end(), name) == report.artifacts.end())
            report.artifacts.push_back(name);
    }
};

std::string fmt(double v) { return csv::format_double(v); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

const RightShift* as_right(const OperatorSpec& op) { return std::get_if<RightShift>(&op.variant); }
const LeftShift* as_left(const OperatorSpec& op) { return std::get_if<LeftShift>(&op.variant); }
const Convolution* as_conv(const OperatorSpec& op) { return std::get_if<Convolution>(&op.variant); }

bool is_shift(const OperatorSpec& op) { return as_right(op) || as_left(op); }

double shift_length(const OperatorSpec& op) {
    if (auto* r = as_right(op)) return r->t;
    if (auto* l = as_left(op)) return l->t;
    return 0.0;
}

struct Orders {
    GrowthEstimate right;
    GrowthEstimate left;
};

Orders measure_orders(const Context& ctx, bool gelfand) {
    return {growth_order(Side::Right, ctx.cfg.weight, ctx.grid, ctx.cfg.growth_t, gelfand),
            growth_order(Side::Left, ctx.cfg.weight, ctx.grid, ctx.cfg.growth_t, gelfand)};
}

json growth_json(const GrowthEstimate& g) {
    json j{{"side", to_string(g.side)},
           {"alpha_hat", g.alpha_hat},
           {"t_values", g.t_values},
           {"log_norms", g.log_norms},
           {"residual", g.residual},
           {"method", g.method}};
    j["gelfand_alpha"] = g.gelfand_alpha ? json(*g.gelfand_alpha) : json(nullptr);
    return j;
}

/// Strip on which the operator's symbol is holomorphic.
StripSpec strip_for(const OperatorSpec& op, const Orders& o) {
    if (as_right(op)) return StripSpec::half_plane_o(o.right);
    if (as_left(op)) return StripSpec::half_plane_v(o.left);
    if (auto* c = as_conv(op)) {
        if (c->kernel.support_lo() >= 0.0) return StripSpec::half_plane_o(o.right);
        if (c->kernel.support_hi() <= 0.0) return StripSpec::half_plane_v(o.left);
    }
    return StripSpec::measured(o.right, o.left);
}

std::vector<double> default_tilts(const StripSpec& s) {
    const bool lo = std::isfinite(s.a_min), hi = std::isfinite(s.a_max);
    if (lo && hi) {
        if (s.a_max - s.a_min < 1e-9) return {s.a_min};
        std::vector<double> out;
        for (int i = 0; i < 5; ++i) out.push_back(s.a_min + (s.a_max - s.a_min) * i / 4);
        return out;
    }
    if (hi) return {s.a_max - 1.0, s.a_max - 0.5, s.a_max};
    return {s.a_min, s.a_min + 0.5, s.a_min + 1.0};
}

/// Functions supported well inside [0, X - t - reach].
std::vector<GridFunction> interior_tests(const Grid& grid, const Weight& w, double limit) {
    std::vector<GridFunction> tests;
    const double top = std::min(limit, 9.0);
    if (top < 1.5) throw ConfigError("grid too short for interior test functions");
    tests.push_back(GridFunction::indicator(grid, w, 0.0, 1.0));
    tests.push_back(GridFunction::indicator(grid, w, 0.5, top * 0.5));
    const double c = 0.5 * top;
    tests.push_back(GridFunction::sample(grid, w, [&](double x) {
        if (std::abs(x - c) > 0.45 * top) return cplx(0.0);
        return std::exp(-(x - c) * (x - c)) * std::polar(1.0, 2.0 * x);
    }));
    return tests;
}

Kernel bump(const RunConfig& cfg, double center, double h) {
    return Kernel::gaussian_bump(center, cfg.bump_half_width, h);
}

// ---------------------------------------------------------------- checks

void check_admissibility(Context& ctx) {
    const auto rep = admissibility_check(ctx.cfg.weight, ctx.cfg.probes, ctx.grid,
                                         ctx.cfg.tol("admissibility"));
    double worst = 0.0;
    json probes = json::array();
    for (const auto& p : rep.probes) {
        const std::size_t n = p.sup_by_window.size();
        if (n >= 2) {
            worst = std::max(worst, std::abs(p.sup_by_window[n - 1] - p.sup_by_window[n - 2]) /
                                        p.sup_by_window[n - 2]);
            worst = std::max(worst, std::abs(p.inf_by_window[n - 1] - p.inf_by_window[n - 2]) /
                                        p.inf_by_window[n - 2]);
        }
        probes.push_back({{"t", p.t},
                          {"inf_ratio", p.inf_ratio},
                          {"sup_ratio", p.sup_ratio},
                          {"inf_by_window", p.inf_by_window},
                          {"sup_by_window", p.sup_by_window},
                          {"stable", p.stable},
                          {"overflow", p.overflow}});
    }
    auto rec = at_most("admissibility", "translation ratios of the weight are bounded above and below",
                       worst, ctx.cfg.tol("admissibility"));
    rec.status = rep.pass ? Status::Pass : Status::Fail;
    rec.detail = rep.growth_flag ? "sup ratio keeps growing with the window" : "";
    ctx.report.add(rec);
    ctx.write_artifact("weights_check.json",
                       canonical_dump({{"weight", ctx.cfg.weight_label},
                                       {"windows", rep.windows},
                                       {"tolerance", rep.tolerance},
                                       {"pass", rep.pass},
                                       {"growth_flag", rep.growth_flag},
                                       {"probes", probes}}));
}

void check_norm_identity(Context& ctx) {
    const double h = ctx.grid.spacing();
    std::vector<double> ts = ctx.cfg.norm_t;
    if (ts.empty()) ts = {h, 1.0, 2.0};
    json rows = json::array();
    for (Side side : {Side::Right, Side::Left}) {
        double worst = 0.0;
        for (double t : ts) {
            if (!ctx.grid.is_multiple(t) || t >= ctx.grid.extent()) {
                throw ConfigError("spectra.norm_t entry " + fmt(t) + " is not a grid multiple below X");
            }
            const auto spec = side == Side::Right ? OperatorSpec::right_shift(t) : OperatorSpec::left_shift(t);
            const double svd = operator_norm(assemble_matrix(spec, ctx.grid, ctx.cfg.weight));
            const double exact = exact_shift_norm(side, t, ctx.grid, ctx.cfg.weight);
            worst = std::max(worst, std::abs(svd - exact) / std::max(1.0, exact));
            rows.push_back({{"side", to_string(side)}, {"t", t}, {"operator_norm", svd}, {"exact", exact}});
        }
        ctx.report.add(at_most(std::string("norm-identity/") + to_string(side),
                               side == Side::Right
                                   ? "||S_t|| equals the largest weight ratio omega(x+t)/omega(x)"
                                   : "||P+S_-t|| equals the largest weight ratio omega(x)/omega(x+t)",
                               worst, ctx.cfg.tol("norm_identity")));
    }
    json doc{{"weight", ctx.cfg.weight_label},
             {"grid", {{"X", ctx.grid.extent()}, {"N", ctx.grid.count()}}},
             {"shift_norms", rows}};
    doc["operator"] = ctx.cfg.op.describe();
    doc["operator_norm"] = operator_norm(assemble_matrix(ctx.cfg.op, ctx.grid, ctx.cfg.weight));
    ctx.write_artifact("norms.json", canonical_dump(doc));
}

Orders check_growth(Context& ctx) {
    Orders o = measure_orders(ctx, true);
    const auto& known = ctx.cfg.weight.known_orders();
    const auto family = ctx.cfg.weight.family();
    const bool exact_family =
        family == Weight::Family::Constant || family == Weight::Family::Exponential;
    auto compare = [&](const char* name, const char* anchor, double measured, double expected) {
        if (exact_family) {
            ctx.report.add(close_to(name, anchor, measured, expected, ctx.cfg.tol("growth")));
        } else {
            auto rec = close_to(name, anchor, measured, expected, ctx.cfg.tol("growth_asymptotic"));
            if (rec.status == Status::Fail) {
                rec.status = Status::Inconclusive;
                rec.detail = "known order is asymptotic; the window is too short to resolve it";
            }
            ctx.report.add(rec);
        }
    };
    if (known) {
        compare("growth/alpha0", "ground order alpha0 of the right shifts", o.right.alpha_hat, known->alpha0);
        compare("growth/alpha1", "ground order alpha1 of the truncated left shifts", o.left.alpha_hat,
                known->alpha1);
    }
    ctx.report.add(at_least("growth/order-sum", "alpha0 + alpha1 >= 0",
                            o.right.alpha_hat + o.left.alpha_hat, -ctx.cfg.tol("order_sum")));
    ctx.write_artifact("growth.json", canonical_dump({{"weight", ctx.cfg.weight_label},
                                                      {"right", growth_json(o.right)},
                                                      {"left", growth_json(o.left)}}));
    return o;
}

void check_defects(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const double h = ctx.grid.spacing();
    const double t = std::round(1.0 / h) * h;
    const double offset = cfg.bump_half_width + 0.5;
    const Kernel plus = bump(cfg, offset, h);
    const Kernel minus = bump(cfg, -offset, h);
    const double reach = std::max({cfg.op.reach(), plus.reach(), t});
    const auto tests = interior_tests(ctx.grid, cfg.weight, ctx.grid.extent() - t - reach - 1.0);

    ctx.report.add(at_most("wiener-hopf/operator", "P+S_-t T S_t = T for the configured operator",
                           wiener_hopf_defect(cfg.op, t, tests), cfg.tol("wiener_hopf")));
    const cplx alpha(0.7, 0.0), beta(-1.3, 0.4);
    const auto combo = OperatorSpec::combo({{alpha, OperatorSpec::left_shift(t)},
                                            {beta, OperatorSpec::right_shift(t)}});
    ctx.report.add(at_most("wiener-hopf/combination", "alpha P+S_-t + beta S_t is Wiener-Hopf",
                           wiener_hopf_defect(combo, t, tests), cfg.tol("wiener_hopf")));

    const auto tp = OperatorSpec::convolution(plus);
    const auto tm = OperatorSpec::convolution(minus);
    const std::span<const GridFunction> indicator(tests.data(), 1);
    ctx.report.add(at_most("commutator/positive-kernel-right-shift",
                           "kernel supported in R+ commutes with S_t",
                           commutator_defect(tp, t, Side::Right, tests), cfg.tol("commutator")));
    ctx.report.add(at_least("commutator/positive-kernel-left-shift",
                            "kernel supported in R+ does not commute with P+S_-t",
                            commutator_defect(tp, t, Side::Left, indicator), cfg.tol("commutator_gap")));
    ctx.report.add(at_most("commutator/negative-kernel-left-shift",
                           "kernel supported in R- commutes with P+S_-t",
                           commutator_defect(tm, t, Side::Left, tests), cfg.tol("commutator")));
    ctx.report.add(at_least("commutator/negative-kernel-right-shift",
                            "kernel supported in R- does not commute with S_t",
                            commutator_defect(tm, t, Side::Right, indicator), cfg.tol("commutator_gap")));
}

void write_symbol_csv(Context& ctx, const SymbolFunction& mu, std::span<const double> tilts) {
    std::vector<csv::SymbolSample> samples;
    const int n = ctx.cfg.xi_count;
    for (double a : tilts) {
        for (int i = 0; i < n; ++i) {
            const double xi =
                n == 1 ? ctx.cfg.xi_min : ctx.cfg.xi_min + (ctx.cfg.xi_max - ctx.cfg.xi_min) * i / (n - 1);
            samples.push_back({xi, a, mu.on_line(a, xi)});
        }
    }
    std::ostringstream os;
    csv::write_symbol_samples(os, samples);
    ctx.write_artifact("symbol.csv", os.str());
}

void add_bound_records(Context& ctx, const std::string& prefix, const SymbolBoundReport& rep) {
    double worst = 0.0;
    int unstable = 0;
    for (const auto& l : rep.lines) {
        worst = std::max(worst, l.ratio_to_norm);
        unstable += !l.stabilized;
    }
    auto rec = at_most(prefix + "/bound", "|h_a(xi)| <= ||T|| on every line of the strip", worst,
                       1.0 + rep.slack);
    if (rec.status == Status::Pass && unstable) {
        rec.status = Status::Inconclusive;
        rec.detail = std::to_string(unstable) + " line maxima did not stabilize";
    }
    ctx.report.add(rec);
    ctx.report.add(at_most(prefix + "/holomorphy", "the symbol is holomorphic inside the strip",
                           rep.cr_residual_max, ctx.cfg.tol("cauchy_riemann")));
}

void check_convention(Context& ctx) {
    const double h = ctx.grid.spacing();
    const double t = std::round(1.0 / h) * h;
    const auto delta = SymbolFunction::kernel(Kernel::delta(t, h));
    double worst = 0.0;
    for (double a : {-0.5, 0.0, 0.5}) {
        for (double xi : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
            const cplx z(xi, a);
            worst = std::max(worst, std::abs(delta(z) - shift_symbol(t, Side::Right, z)));
        }
    }
    ctx.report.add(at_most("symbol/convention", "the symbol of S_t is exp(-itz)", worst,
                           ctx.cfg.tol("convention")));
}

void check_symbol_bound(Context& ctx, const Orders& o) {
    const double h = ctx.grid.spacing();
    const Kernel k = bump(ctx.cfg, ctx.cfg.bump_center, h);
    const MatrixOperator m = assemble_matrix(OperatorSpec::convolution(k), ctx.grid, ctx.cfg.weight);
    const StripSpec strip = StripSpec::measured(o.right, o.left);
    const std::vector<double> tilts = ctx.cfg.symbol_a.empty() ? default_tilts(strip) : ctx.cfg.symbol_a;
    const auto rep = symbol_bound_check(m, SymbolFunction::kernel(k), strip, tilts,
                                        ctx.cfg.tol("symbol_slack"));
    add_bound_records(ctx, "symbol", rep);
    check_convention(ctx);

    const auto mu = SymbolFunction::of(ctx.cfg.op);
    const StripSpec op_strip = strip_for(ctx.cfg.op, o);
    write_symbol_csv(ctx, mu, ctx.cfg.symbol_a.empty() ? default_tilts(op_strip) : ctx.cfg.symbol_a);
}

void check_symmetry(Context& ctx) {
    if (!is_shift(ctx.cfg.op)) return;
    const MatrixOperator m = assemble_matrix(ctx.cfg.op, ctx.grid, ctx.cfg.weight);
    std::vector<cplx> nodes;
    for (double r : {0.5, 1.5}) {
        nodes.emplace_back(r, 0.0);
        for (double th : {kPi / 7, 1.0, 2.5}) nodes.push_back(std::polar(r, th));
    }
    const auto ps = pseudospectrum(m, nodes, ctx.cfg.threads);
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes.size(); i += 4) {
        for (std::size_t k = 1; k < 4; ++k)
            worst = std::max(worst, std::abs(ps.sigma_min[i + k] - ps.sigma_min[i]));
    }
    ctx.report.add(at_most("spectrum/circular-symmetry",
                           "sigma_min(zI - M) of a weighted shift depends only on |z|", worst,
                           ctx.cfg.tol("symmetry")));
}

double predicted_radius(const OperatorSpec& op, const Orders& o) {
    if (auto* r = as_right(op)) return std::exp(o.right.alpha_hat * r->t);
    if (auto* l = as_left(op)) return std::exp(o.left.alpha_hat * l->t);
    return 0.0;
}

void check_disk(Context& ctx, const Orders& o) {
    if (!is_shift(ctx.cfg.op)) return;
    const double radius = predicted_radius(ctx.cfg.op, o);
    std::vector<cplx> samples = disk_nodes(ctx.cfg.disk_samples, 0.9 * radius);
    const auto outer = annulus_nodes(ctx.cfg.disk_samples, 1.1 * radius, 2.0 * radius);
    samples.insert(samples.end(), outer.begin(), outer.end());
    ScanThresholds th;
    th.inside_max = ctx.cfg.tol("inside");
    const auto rep = disk_scan(ctx.cfg.op, ctx.cfg.weight, ctx.cfg.scan_h, ctx.cfg.n_schedule, radius,
                               samples, th);
    const bool right = as_right(ctx.cfg.op) != nullptr;
    const std::string anchor = right ? "spectrum of S_t is the disk |z| <= exp(alpha0 t)"
                                     : "spectrum of P+S_-t is the disk |z| <= exp(alpha1 t)";
    auto frac = [](int a, int b) { return b ? static_cast<double>(a) / b : 1.0; };
    auto inside = at_least("disk/inside", anchor, frac(rep.inside_passed, rep.inside_total), 1.0);
    inside.detail = std::to_string(rep.inside_passed) + "/" + std::to_string(rep.inside_total) +
                    " inside samples with sigma_min <= " + fmt(th.inside_max) + " and non-increasing in N";
    auto outside = at_least("disk/outside", anchor, frac(rep.outside_passed, rep.outside_total), 1.0);
    outside.detail = std::to_string(rep.outside_passed) + "/" + std::to_string(rep.outside_total) +
                     " outside samples with sigma_min >= |z| - ||M||";
    ctx.report.add(inside);
    ctx.report.add(outside);

    std::ostringstream os;
    os << "z_re,z_im,region";
    for (int n : rep.n_schedule) os << ",sigma_min_N" << n;
    os << '\n';
    for (const auto& s : rep.samples) {
        os << fmt(s.z.real()) << ',' << fmt(s.z.imag()) << ',' << to_string(s.region);
        for (double v : s.sigma_by_n) os << ',' << fmt(v);
        os << '\n';
    }
    ctx.write_artifact("disk_scan.csv", os.str());
}

void check_inclusion(Context& ctx, const Orders& o) {
    const OperatorSpec& op = ctx.cfg.op;
    const Convolution* conv = as_conv(op);
    if (!is_shift(op) && !conv) return;
    const StripSpec strip = strip_for(op, o);
    const bool lower = std::isfinite(strip.a_max) && !std::isfinite(strip.a_min);
    const bool upper = std::isfinite(strip.a_min) && !std::isfinite(strip.a_max);
    if (!lower && !upper) return;
    const double t = is_shift(op) ? shift_length(op) : 1.0;
    // |lambda| <= 0.9 R on the chosen band for shifts
    const double edge = lower ? strip.a_max + std::log(0.9) / t : strip.a_min - std::log(0.9) / t;
    const double a_lo = lower ? edge - 2.0 / t : edge;
    const double a_hi = lower ? edge : edge + 2.0 / t;
    const auto pre = strip_preimages(ctx.cfg.inclusion_samples, -kPi / t, kPi / t, a_lo, a_hi);
    ScanThresholds th;
    th.inclusion_max = ctx.cfg.tol("inclusion");
    const auto mu = SymbolFunction::of(op);
    const auto rep = spectrum_inclusion_scan(op, ctx.cfg.weight, mu, strip, pre, ctx.cfg.scan_h,
                                             ctx.cfg.n_schedule, th);
    auto rec = at_least("inclusion/symbol-range",
                        lower ? "closure of the symbol image over Im z < alpha0 lies in the spectrum"
                              : "closure of the symbol image over Im z > -alpha1 lies in the spectrum",
                        rep.consistent_fraction, ctx.cfg.tol("inclusion_fraction"));
    rec.detail = "fraction of samples consistent with inclusion";
    ctx.report.add(rec);

    const Grid big = grid_with_spacing(ctx.cfg.scan_h, ctx.cfg.n_schedule.back());
    const double norm = operator_norm(assemble_matrix(op, big, ctx.cfg.weight));
    const cplx far(2.0 * std::max(norm, 0.5), 0.0);
    const auto outside = inclusion_scan(op, ctx.cfg.weight, ctx.cfg.scan_h, ctx.cfg.n_schedule,
                                        std::span<const cplx>(&far, 1), th);
    const auto& s = outside.samples.front();
    auto orec = at_least("inclusion/outside", "points beyond ||T|| are outside the spectrum",
                         *std::min_element(s.sigma_by_n.begin(), s.sigma_by_n.end()),
                         std::abs(far) - *std::max_element(s.norm_by_n.begin(), s.norm_by_n.end()) - 1e-9);
    if (s.verdict != InclusionVerdict::OutsideConsistent) orec.status = Status::Fail;
    orec.detail = to_string(s.verdict);
    ctx.report.add(orec);

    json samples = json::array();
    for (const auto& x : rep.samples) {
        samples.push_back({{"lambda", complex_json(x.lambda)},
                           {"preimage", complex_json(x.preimage)},
                           {"sigma_by_n", x.sigma_by_n},
                           {"verdict", to_string(x.verdict)}});
    }
    ctx.write_artifact("inclusion.json",
                       canonical_dump({{"operator", rep.operator_label},
                                       {"weight", ctx.cfg.weight_label},
                                       {"strip", {{"a_min", strip.a_min}, {"a_max", strip.a_max},
                                                  {"provenance", strip.provenance}}},
                                       {"spacing", rep.spacing},
                                       {"n_schedule", rep.n_schedule},
                                       {"consistent_fraction", rep.consistent_fraction},
                                       {"samples", samples}}));
}

json quasimode_json(const QuasimodeReport& q, const Grid& g) {
    return {{"a", q.params.a},
            {"eta0", q.params.eta0},
            {"b", q.params.b},
            {"t0", q.params.t0},
            {"epsilon", q.params.epsilon},
            {"X", g.extent()},
            {"N", g.count()},
            {"lambda", complex_json(q.lambda)},
            {"residual_ratio", q.residual_ratio},
            {"delta", q.delta},
            {"delta_found", q.delta_found},
            {"sup_in_band", q.sup_in_band},
            {"sup_global", q.sup_global},
            {"out_of_band", q.out_of_band},
            {"leakage", q.leakage},
            {"witness_tolerance", q.witness_tolerance},
            {"cutoff_first_derivative", q.cutoff_bounds.first},
            {"cutoff_second_derivative", q.cutoff_bounds.second},
            {"passed", q.passed}};
}

json run_quasimode(Context& ctx, const std::string& label, const OperatorSpec& op, const Orders& o) {
    const auto& q = ctx.cfg.quasimode;
    const StripSpec strip = strip_for(op, o);
    QuasimodeParams p;
    p.a = std::isnan(q.a) ? std::clamp(0.0, strip.a_min, strip.a_max) : q.a;
    p.eta0 = q.eta0_set ? q.eta0 : (is_shift(op) ? kPi / shift_length(op) : 0.0);
    p.b = q.b;
    p.t0 = q.t0;
    p.epsilon = q.epsilon;
    const Grid base = build_grid(q.extent, q.count);
    const auto sched = quasimode_schedule(op, ctx.cfg.weight, p, base, q.levels, strip);
    // the witness is judged on the widest packet of the schedule; coarser
    // levels are reported in quasimode.json and feed the refinement check
    const auto& finest = sched.levels.back();
    const Grid& finest_grid = sched.grids.back();

    auto rec = at_most("quasimode/" + label, "symbol values on the strip lie in the approximate point spectrum",
                       finest.residual_ratio, finest.witness_tolerance);
    rec.detail = "b = " + fmt(finest.params.b) + ", t0 = " + fmt(finest.params.t0) +
                 ", N = " + std::to_string(finest_grid.count()) + ", delta = " + fmt(finest.delta);
    if (!finest.delta_found) {
        rec.status = Status::Fail;
        rec.detail += "; no band keeps |mu - lambda| <= sqrt(epsilon) with out-of-band energy <= epsilon";
    }
    ctx.report.add(rec);
    if (sched.levels.size() > 1) {
        double worst = 0.0;
        for (std::size_t l = 1; l < sched.levels.size(); ++l)
            worst = std::max(worst, sched.levels[l].residual_ratio / sched.levels[l - 1].residual_ratio);
        ctx.report.add(at_most("quasimode/" + label + "-refinement",
                               "residual shrinks as the packet widens (b/2, 2 t0)", worst,
                               1.0 + sched.slack));
    }
    json levels = json::array();
    for (std::size_t l = 0; l < sched.levels.size(); ++l) levels.push_back(quasimode_json(sched.levels[l], sched.grids[l]));
    return {{"operator", op.describe()},
            {"strip", {{"a_min", strip.a_min}, {"a_max", strip.a_max}, {"provenance", strip.provenance}}},
            {"levels", levels},
            {"non_increasing", sched.non_increasing}};
}

void check_out_of_band(Context& ctx) {
    const auto& q = ctx.cfg.quasimode;
    const Grid g = build_grid(q.extent, q.count);
    const Weight one = Weight::constant();
    const Eigen::VectorXcd F =
        wave_packet(g, one, 0.0, q.b, q.t0).samples().cwiseProduct(cutoff_window(g, one, q.t0).samples());
    ctx.report.add(at_most("quasimode/out-of-band", "a Gaussian packet concentrates near its frequency",
                           out_of_band_fraction(F, g, 0.0, 1.0), ctx.cfg.tol("out_of_band")));
}

void check_quasimode(Context& ctx, const Orders& o, bool with_kernel) {
    json doc = json::object();
    const OperatorSpec& op = ctx.cfg.op;
    if (is_shift(op) || as_conv(op)) doc["operator"] = run_quasimode(ctx, "operator", op, o);
    if (with_kernel) {
        const double h = ctx.cfg.quasimode.extent / ctx.cfg.quasimode.count;
        doc["kernel"] = run_quasimode(ctx, "kernel",
                                      OperatorSpec::convolution(bump(ctx.cfg, ctx.cfg.bump_center, h)), o);
    }
    check_out_of_band(ctx);
    ctx.write_artifact("quasimode.json", canonical_dump(doc));
}

void run_pseudospec(Context& ctx, const Orders* o) {
    const MatrixOperator m = assemble_matrix(ctx.cfg.op, ctx.grid, ctx.cfg.weight, ctx.cfg.allow_large);
    const auto nodes = rectangular_nodes(ctx.cfg.z_re_min, ctx.cfg.z_re_max, ctx.cfg.z_im_min,
                                         ctx.cfg.z_im_max, ctx.cfg.z_nx, ctx.cfg.z_ny);
    const auto ps = pseudospectrum(m, nodes, ctx.cfg.threads);
    std::ostringstream os;
    csv::write_pseudospectrum(os, ps);
    ctx.write_artifact("pseudospectrum.csv", os.str());
    int failed = 0;
    for (const auto& e : ps.node_errors) failed += !e.empty();
    json side{{"weight", ctx.cfg.weight_label},
              {"operator", ctx.cfg.op.describe()},
              {"X", ctx.grid.extent()},
              {"N", ctx.grid.count()},
              {"nx", ctx.cfg.z_nx},
              {"ny", ctx.cfg.z_ny},
              {"csv", "pseudospectrum.csv"},
              {"failed_nodes", failed}};
    side["t"] = is_shift(ctx.cfg.op) ? json(shift_length(ctx.cfg.op)) : json(nullptr);
    side["predicted_radius"] = o && is_shift(ctx.cfg.op) ? json(predicted_radius(ctx.cfg.op, *o)) : json(nullptr);
    ctx.write_artifact("pseudospectrum.json", canonical_dump(side));
    ctx.report.add(at_most("pseudospec/nodes", "sigma_min(zI - M) computed at every node", failed, 0.0));
}

void run_symbol(Context& ctx, const Orders& o) {
    const auto mu = SymbolFunction::of(ctx.cfg.op);
    const StripSpec strip = strip_for(ctx.cfg.op, o);
    const std::vector<double> tilts = ctx.cfg.symbol_a.empty() ? default_tilts(strip) : ctx.cfg.symbol_a;
    for (double a : tilts) {
        if (!strip.contains(a, kStripMargin))
            throw PreconditionError("symbol tilt a = " + fmt(a) + " lies outside the strip");
    }
    write_symbol_csv(ctx, mu, tilts);
    if (as_conv(ctx.cfg.op)) {
        const MatrixOperator m = assemble_matrix(ctx.cfg.op, ctx.grid, ctx.cfg.weight);
        add_bound_records(ctx, "symbol", symbol_bound_check(m, mu, strip, tilts, ctx.cfg.tol("symbol_slack")));
    } else {
        double worst = 0.0;
        for (double a : tilts)
            for (double xi : {-2.3, -0.6, 0.45, 1.7}) worst = std::max(worst, cauchy_riemann_residual(mu, a, xi));
        ctx.report.add(at_most("symbol/holomorphy", "the symbol is holomorphic inside the strip", worst,
                               ctx.cfg.tol("cauchy_riemann")));
    }
    check_convention(ctx);
}

}  // namespace

void run_pipeline(const std::string& command, const RunConfig& cfg, VerificationReport& report) {
    Context ctx{cfg, report, build_grid(cfg.extent, cfg.count)};
    validate(cfg.op, ctx.grid);
    fs::create_directories(cfg.out_dir);
    report.command = command;

    if (command == "weights-check") {
        check_admissibility(ctx);
    } else if (command == "norms") {
        check_norm_identity(ctx);
    } else if (command == "growth") {
        check_growth(ctx);
    } else if (command == "pseudospec") {
        const Orders o = measure_orders(ctx, false);
        run_pseudospec(ctx, &o);
    } else if (command == "symbol") {
        run_symbol(ctx, measure_orders(ctx, false));
    } else if (command == "witness") {
        check_quasimode(ctx, measure_orders(ctx, false), false);
    } else if (command == "verify-all") {
        check_admissibility(ctx);
        check_norm_identity(ctx);
        const Orders o = check_growth(ctx);
        check_defects(ctx);
        check_symbol_bound(ctx, o);
        check_symmetry(ctx);
        check_disk(ctx, o);
        check_inclusion(ctx, o);
        check_quasimode(ctx, o, true);
    } else {
        throw ConfigError("unknown subcommand '" + command + "'");
    }
}

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"whlab: weighted half-line shift and Wiener-Hopf verification"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    app.add_option("-c,--config", config_path, "JSON config file (nested or dotted keys)");
    app.add_option("-s,--set", overrides, "override a config key: key=value (repeatable)");
    app.add_option("-o,--out", out_dir, "output directory (same as output.dir)");
    static const std::map<std::string, std::string> blurbs = {
        {"weights-check", "ratio bounds and admissibility on widening windows"},
        {"norms", "shift norms against the exact ratio maxima"},
        {"growth", "ground orders and Gelfand radius"},
        {"pseudospec", "sigma_min(zI - T) on a rectangle of z"},
        {"symbol", "symbol samples and convention lock; symbol bound for kernels"},
        {"witness", "quasimode residuals and refinement"},
        {"verify-all", "every check on one config"}};
    for (const auto& name : kSubcommands) app.add_subcommand(name, blurbs.at(name));

    std::vector<std::string> rev(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    VerificationReport report;
    try {
        FlatConfig flat = default_config();
        fs::path base_dir;
        if (!config_path.empty()) {
            flat = load_config(config_path);
            base_dir = fs::path(config_path).parent_path();
        }
        for (const auto& o : overrides) apply_override(flat, o);
        if (!out_dir.empty()) flat["output.dir"] = out_dir;
        const RunConfig cfg = resolve(flat, base_dir);

        report.config = json::object();
        for (const auto& [k, v] : cfg.echo) report.config[k] = v;
        report.environment = {{"whlab_version", "0.1.0"},
                              {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                    std::to_string(EIGEN_MINOR_VERSION)},
                              {"compiler", __VERSION__}};
        run_pipeline(command, cfg, report);
        report.artifacts.push_back("report.json");
        write_report(report, cfg.out_dir / "report.json");
        std::ofstream manifest(cfg.out_dir / "manifest.json", std::ios::binary);
        manifest << canonical_dump({{"command", command},
                                    {"report", "report.json"},
                                    {"artifacts", report.artifacts},
                                    {"status", to_string(report.overall())}});
        if (!manifest) throw std::runtime_error("cannot write manifest.json");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    for (const auto& c : report.checks) {
        out << to_string(c.status) << "  " << c.name << "  measured=" << fmt(c.measured) << ' '
            << c.relation << ' ' << fmt(c.expected);
        if (c.relation == "~=") out << " +/- " << fmt(c.tolerance);
        if (!c.detail.empty()) out << "  (" << c.detail << ')';
        out << '\n';
    }
    out << "overall: " << to_string(report.overall()) << '\n';
    return report.exit_code();
}

}  // namespace whlab::cli
