#pragma once

#include <complex>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "whlab/operators.hpp"
#include "whlab/weights.hpp"

namespace whlab::cli {

/// Bad config value, missing file or similar; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key space: "section.name" -> JSON value. Unknown keys are rejected.
using FlatConfig = std::map<std::string, nlohmann::json>;

/// All keys with their defaults.
const FlatConfig& default_config();

/// Loads a JSON config (nested objects or dotted keys) over the defaults.
FlatConfig load_config(const std::filesystem::path& path, FlatConfig base = default_config());
/// Applies "key=value"; the value is parsed as JSON when possible, else taken as a string.
void apply_override(FlatConfig& cfg, const std::string& assignment);

struct QuasimodeConfig {
    double a = 0.0;
    double eta0 = 0.0;
    bool eta0_set = false;  ///< false: pick the natural frequency for the operator
    double b = 0.25;
    double t0 = 10.0;
    double epsilon = 0.1;
    double extent = 40.0;
    int count = 800;
    int levels = 2;
};

struct RunConfig {
    Weight weight = Weight::constant();
    std::string weight_label;
    double extent = 20.0;
    int count = 400;
    bool allow_large = false;

    OperatorSpec op = OperatorSpec::right_shift(1.0);
    std::string op_variant;
    double op_t = 1.0;

    // bump kernel for the symbol and quasimode checks; the commutator checks
    // use copies centered at +/-(half_width + 1/2)
    double bump_center = 0.0;
    double bump_half_width = 1.0;

    std::vector<double> norm_t;     ///< empty: {h, 1, 2}
    std::vector<double> growth_t;
    std::vector<double> probes;
    double z_re_min = -2, z_re_max = 2, z_im_min = -2, z_im_max = 2;
    int z_nx = 81, z_ny = 81;
    double scan_h = 0.25;
    std::vector<int> n_schedule;
    int disk_samples = 25;
    unsigned threads = 0;

    std::vector<double> symbol_a;   ///< empty: derived from the measured strip
    double xi_min = -6.283185307179586, xi_max = 6.283185307179586;
    int xi_count = 257;
    int inclusion_samples = 50;
    QuasimodeConfig quasimode;

    std::filesystem::path out_dir = "whlab-out";

    std::map<std::string, double> tolerance;

    FlatConfig echo;

    double tol(const std::string& key) const { return tolerance.at(key); }
};

/// Validates and converts; throws ConfigError.
RunConfig resolve(const FlatConfig& cfg, const std::filesystem::path& base_dir = {});

}  // namespace whlab::cli
