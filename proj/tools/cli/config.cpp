#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "whlab/csv.hpp"
#include "whlab/errors.hpp"

namespace whlab::cli {
namespace {

using nlohmann::json;

void flatten(const json& node, const std::string& prefix, FlatConfig& out) {
    if (node.is_object() && !node.empty()) {
        for (const auto& [k, v] : node.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    out[prefix] = node;
}

template <class T>
T get(const FlatConfig& cfg, const std::string& key) {
    const json& v = cfg.at(key);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type: " + v.dump());
    }
}

double positive(const FlatConfig& cfg, const std::string& key) {
    const double v = get<double>(cfg, key);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("config key '" + key + "' must be positive");
    return v;
}

int positive_int(const FlatConfig& cfg, const std::string& key) {
    const int v = get<int>(cfg, key);
    if (v < 1) throw ConfigError("config key '" + key + "' must be a positive integer");
    return v;
}

Weight make_weight(const std::string& family, const json& param, std::string& label) {
    auto p = [&](double fallback) { return param.is_null() ? fallback : param.get<double>(); };
    if (family == "constant") {
        label = "constant";
        return Weight::constant();
    }
    if (family == "exponential") {
        const double r = p(1.0);
        label = "exponential(" + csv::format_double(r) + ")";
        return Weight::exponential(r);
    }
    if (family == "polynomial") {
        const double k = p(2.0);
        label = "polynomial(" + csv::format_double(k) + ")";
        return Weight::polynomial(k);
    }
    if (family == "oscillatory") {
        const double g = p(1.0);
        label = "oscillatory(" + csv::format_double(g) + ")";
        return Weight::oscillatory(g);
    }
    throw ConfigError("unknown weight.family '" + family +
                      "' (constant, exponential, polynomial, oscillatory)");
}

Kernel load_kernel(const std::filesystem::path& path, double h) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open kernel file " + path.string());
    try {
        return csv::read_kernel(in, h);
    } catch (const FormatError& e) {
        throw ConfigError("kernel file " + path.string() + ": " + e.what());
    }
}

OperatorSpec make_simple(const std::string& variant, double t, const Kernel* kernel) {
    if (variant == "right_shift") return OperatorSpec::right_shift(t);
    if (variant == "left_shift") return OperatorSpec::left_shift(t);
    if (variant == "convolution") return OperatorSpec::convolution(*kernel);
    throw ConfigError("unknown operator variant '" + variant +
                      "' (right_shift, left_shift, convolution, combo)");
}

}  // namespace

const FlatConfig& default_config() {
    static const FlatConfig defaults = [] {
        FlatConfig d;
        d["weight.family"] = "constant";
        d["weight.parameter"] = nullptr;
        d["grid.X"] = 20.0;
        d["grid.N"] = 400;
        d["grid.allow_large"] = false;
        d["operator.variant"] = "right_shift";
        d["operator.t"] = 1.0;
        d["operator.kernel_path"] = "";
        d["operator.kernel_center"] = 1.0;
        d["operator.kernel_half_width"] = 0.5;
        d["operator.combo"] = json::array();
        d["spectra.norm_t"] = json::array();
        d["spectra.growth_t"] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        d["spectra.probes"] = {1, 2, 5};
        d["spectra.z_bounds"] = {-2, 2, -2, 2};
        d["spectra.z_resolution"] = {81, 81};
        d["spectra.scan_h"] = 0.25;
        d["spectra.n_schedule"] = {100, 200, 400};
        d["spectra.disk_samples"] = 25;
        d["spectra.threads"] = 0;
        d["symbol.a_values"] = json::array();
        d["symbol.xi_range"] = {-2 * std::numbers::pi, 2 * std::numbers::pi};
        d["symbol.xi_count"] = 257;
        d["symbol.inclusion_samples"] = 50;
        d["symbol.kernel_center"] = 0.0;
        d["symbol.kernel_half_width"] = 1.0;
        d["symbol.quasimode.a"] = nullptr;
        d["symbol.quasimode.eta0"] = nullptr;
        d["symbol.quasimode.b"] = 0.25;
        d["symbol.quasimode.t0"] = 10.0;
        d["symbol.quasimode.epsilon"] = 0.1;
        d["symbol.quasimode.X"] = 40.0;
        d["symbol.quasimode.N"] = 800;
        d["symbol.quasimode.levels"] = 2;
        d["output.dir"] = "whlab-out";
        d["tolerance.norm_identity"] = 1e-10;
        d["tolerance.growth"] = 1e-6;
        d["tolerance.growth_asymptotic"] = 0.05;
        d["tolerance.order_sum"] = 0.02;
        d["tolerance.admissibility"] = 0.05;
        d["tolerance.commutator"] = 1e-10;
        d["tolerance.commutator_gap"] = 0.05;
        d["tolerance.wiener_hopf"] = 1e-12;
        d["tolerance.symbol_slack"] = 0.05;
        d["tolerance.convention"] = 1e-12;
        d["tolerance.cauchy_riemann"] = 1e-4;
        d["tolerance.symmetry"] = 1e-10;
        d["tolerance.inside"] = 1e-4;
        d["tolerance.inclusion"] = 1e-3;
        d["tolerance.inclusion_fraction"] = 0.95;
        d["tolerance.out_of_band"] = 0.02;
        return d;
    }();
    return defaults;
}

FlatConfig load_config(const std::filesystem::path& path, FlatConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
    FlatConfig flat;
    flatten(doc, "", flat);
    for (auto& [k, v] : flat) {
        if (!base.count(k)) throw ConfigError("unknown config key '" + k + "'");
        base[k] = v;
    }
    return base;
}

void apply_override(FlatConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    if (!cfg.count(key)) throw ConfigError("unknown config key '" + key + "'");
    json v = json::parse(raw, nullptr, false);
    cfg[key] = v.is_discarded() ? json(raw) : v;
}

RunConfig resolve(const FlatConfig& cfg, const std::filesystem::path& base_dir) {
    RunConfig rc;
    rc.echo = cfg;
    try {
        rc.weight = make_weight(get<std::string>(cfg, "weight.family"), cfg.at("weight.parameter"),
                                rc.weight_label);
    } catch (const json::exception&) {
        throw ConfigError("weight.parameter must be a number or null");
    }
    rc.extent = positive(cfg, "grid.X");
    rc.count = positive_int(cfg, "grid.N");
    rc.allow_large = get<bool>(cfg, "grid.allow_large");
    if (rc.count < 2) throw ConfigError("grid.N must be at least 2");
    if (rc.count > kDefaultMatrixGuard && !rc.allow_large)
        throw ConfigError("grid.N = " + std::to_string(rc.count) + " exceeds the guard of " +
                          std::to_string(kDefaultMatrixGuard) + " (set grid.allow_large)");
    const double h = rc.extent / rc.count;

    rc.op_variant = get<std::string>(cfg, "operator.variant");
    rc.op_t = positive(cfg, "operator.t");
    const std::string kernel_path = get<std::string>(cfg, "operator.kernel_path");
    std::optional<Kernel> kernel;
    if (rc.op_variant == "convolution" || !kernel_path.empty()) {
        if (!kernel_path.empty()) {
            std::filesystem::path p(kernel_path);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            kernel = load_kernel(p, h);
        } else {
            kernel = Kernel::gaussian_bump(get<double>(cfg, "operator.kernel_center"),
                                           positive(cfg, "operator.kernel_half_width"), h);
        }
    }
    if (rc.op_variant == "combo") {
        const json& terms = cfg.at("operator.combo");
        if (!terms.is_array() || terms.empty())
            throw ConfigError("operator.combo must be a non-empty array of terms");
        std::vector<ComboTerm> out;
        for (const json& term : terms) {
            if (!term.is_object() || !term.contains("variant"))
                throw ConfigError("combo term needs a 'variant': " + term.dump());
            std::complex<double> c = 1.0;
            if (term.contains("coefficient")) {
                const json& cj = term["coefficient"];
                if (cj.is_number()) c = cj.get<double>();
                else if (cj.is_array() && cj.size() == 2) c = {cj[0].get<double>(), cj[1].get<double>()};
                else throw ConfigError("combo coefficient must be a number or [re, im]");
            }
            const std::string v = term["variant"].get<std::string>();
            if (v == "convolution" && !kernel) throw ConfigError("combo convolution term needs a kernel");
            const double t = term.value("t", rc.op_t);
            out.push_back({c, make_simple(v, t, kernel ? &*kernel : nullptr)});
        }
        rc.op = OperatorSpec::combo(std::move(out));
    } else {
        rc.op = make_simple(rc.op_variant, rc.op_t, kernel ? &*kernel : nullptr);
    }

    rc.bump_center = get<double>(cfg, "symbol.kernel_center");
    rc.bump_half_width = positive(cfg, "symbol.kernel_half_width");

    rc.norm_t = get<std::vector<double>>(cfg, "spectra.norm_t");
    rc.growth_t = get<std::vector<double>>(cfg, "spectra.growth_t");
    rc.probes = get<std::vector<double>>(cfg, "spectra.probes");
    const auto zb = get<std::vector<double>>(cfg, "spectra.z_bounds");
    if (zb.size() != 4 || zb[1] < zb[0] || zb[3] < zb[2])
        throw ConfigError("spectra.z_bounds must be [re_min, re_max, im_min, im_max]");
    rc.z_re_min = zb[0];
    rc.z_re_max = zb[1];
    rc.z_im_min = zb[2];
    rc.z_im_max = zb[3];
    const auto zr = get<std::vector<int>>(cfg, "spectra.z_resolution");
    if (zr.size() != 2 || zr[0] < 1 || zr[1] < 1)
        throw ConfigError("spectra.z_resolution must be [nx, ny] with positive entries");
    rc.z_nx = zr[0];
    rc.z_ny = zr[1];
    rc.scan_h = positive(cfg, "spectra.scan_h");
    rc.n_schedule = get<std::vector<int>>(cfg, "spectra.n_schedule");
    if (rc.n_schedule.empty()) throw ConfigError("spectra.n_schedule must not be empty");
    for (std::size_t i = 0; i < rc.n_schedule.size(); ++i) {
        if (rc.n_schedule[i] < 2 || (i > 0 && rc.n_schedule[i] <= rc.n_schedule[i - 1]))
            throw ConfigError("spectra.n_schedule must be increasing and >= 2");
        if (rc.n_schedule[i] > kDefaultMatrixGuard && !rc.allow_large)
            throw ConfigError("spectra.n_schedule entry exceeds the matrix guard");
    }
    rc.disk_samples = positive_int(cfg, "spectra.disk_samples");
    const int threads = get<int>(cfg, "spectra.threads");
    if (threads < 0) throw ConfigError("spectra.threads must be >= 0");
    rc.threads = static_cast<unsigned>(threads);

    rc.symbol_a = get<std::vector<double>>(cfg, "symbol.a_values");
    const auto xr = get<std::vector<double>>(cfg, "symbol.xi_range");
    if (xr.size() != 2 || !(xr[1] > xr[0])) throw ConfigError("symbol.xi_range must be [lo, hi] with lo < hi");
    rc.xi_min = xr[0];
    rc.xi_max = xr[1];
    rc.xi_count = positive_int(cfg, "symbol.xi_count");
    rc.inclusion_samples = positive_int(cfg, "symbol.inclusion_samples");

    auto& q = rc.quasimode;
    const json& qa = cfg.at("symbol.quasimode.a");
    const json& qe = cfg.at("symbol.quasimode.eta0");
    if (!qa.is_null() && !qa.is_number()) throw ConfigError("symbol.quasimode.a must be a number or null");
    if (!qe.is_null() && !qe.is_number()) throw ConfigError("symbol.quasimode.eta0 must be a number or null");
    q.a = qa.is_null() ? std::numeric_limits<double>::quiet_NaN() : qa.get<double>();
    q.eta0_set = !qe.is_null();
    q.eta0 = q.eta0_set ? qe.get<double>() : 0.0;
    q.b = positive(cfg, "symbol.quasimode.b");
    q.t0 = positive(cfg, "symbol.quasimode.t0");
    q.epsilon = positive(cfg, "symbol.quasimode.epsilon");
    q.extent = positive(cfg, "symbol.quasimode.X");
    q.count = positive_int(cfg, "symbol.quasimode.N");
    q.levels = positive_int(cfg, "symbol.quasimode.levels");
    if (q.count > kDefaultMatrixGuard && !rc.allow_large)
        throw ConfigError("symbol.quasimode.N exceeds the matrix guard");

    rc.out_dir = get<std::string>(cfg, "output.dir");
    if (rc.out_dir.empty()) throw ConfigError("output.dir must not be empty");

    for (const auto& [key, value] : cfg) {
        if (key.rfind("tolerance.", 0) != 0) continue;
        rc.tolerance[key.substr(10)] = positive(cfg, key);
    }
    return rc;
}

}  // namespace whlab::cli
