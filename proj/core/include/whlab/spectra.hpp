#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whlab/operators.hpp"

namespace whlab {

/// Least-squares growth rate of ln||shift_t|| against t.
struct GrowthEstimate {
    Side side = Side::Right;
    double alpha_hat = 0.0;
    std::vector<double> t_values;
    std::vector<double> log_norms;
    double residual = 0.0;  ///< RMS deviation of the log-norms from the fitted line
    std::string method = "norm-slope";
    /// ln(rho(shift_{t0})) / t0 from matrix powers, when requested and resolvable.
    std::optional<double> gelfand_alpha;

    double t_min() const { return t_values.front(); }
    double t_max() const { return t_values.back(); }
};

/// Requires >= 3 t-values, all grid multiples, max t <= X/2.
GrowthEstimate growth_order(Side side, const Weight& weight, const Grid& grid,
                            std::span<const double> t_values, bool gelfand_check = false);

struct GelfandEstimate {
    std::vector<double> power_norms;  ///< ||M^n||, n = 1..n_max
    std::vector<double> roots;        ///< ||M^n||^{1/n}
    std::optional<double> radius;     ///< empty when truncation-dominated
    bool truncation_dominated = false;
};

/// Spectral radius from ||M^n||: exp of the least-squares slope of ln||M^n||
/// over the last three n. A vanishing power (nilpotent truncation) sets the
/// truncation-dominated flag instead of producing a value.
GelfandEstimate gelfand_radius(const MatrixOperator& m, int n_max);

struct PseudospectrumGrid {
    std::vector<cplx> nodes;
    std::vector<double> sigma_min;
    std::vector<std::string> node_errors;  ///< empty string when the node succeeded
    int matrix_size = 0;
    std::string provenance;
};

/// nx * ny nodes, real part fastest.
std::vector<cplx> rectangular_nodes(double re_min, double re_max, double im_min, double im_max,
                                    int nx, int ny);
/// Uniform-area golden-angle points in the disk |z| <= r_max.
std::vector<cplx> disk_nodes(int count, double r_max);
/// Uniform-area golden-angle points in r_min <= |z| <= r_max.
std::vector<cplx> annulus_nodes(int count, double r_min, double r_max);

/// sigma_min(zI - M) per node. Nodes are independent; `threads` = 0 uses the
/// hardware concurrency. The result does not depend on scheduling.
PseudospectrumGrid pseudospectrum(const MatrixOperator& m, std::span<const cplx> nodes,
                                  unsigned threads = 0);

struct ApproxEigenpair {
    cplx z;
    GridFunction vector;  ///< unit weighted norm
    double residual = 0.0;
};

/// Minimal right singular vector of (M - zI).
ApproxEigenpair approximate_eigenvector(const MatrixOperator& m, cplx z);

/// Classification thresholds for the disk and inclusion scans.
struct ScanThresholds {
    double inside_max = 1e-4;      ///< sigma_min at the largest N for "inside"
    double inclusion_max = 1e-3;   ///< sigma_min at the largest N for symbol-range samples
    double floor = 1e-12;          ///< below this, sigma_min counts as converged
    double outside_factor = 0.3;   ///< sigma_min >= factor (|z| - R) for "outside"
    double boundary_band = 0.1;    ///< relative annulus around R left unclassified
    double neumann_slack = 1e-9;
};

/// Non-increasing across the schedule; values under `floor` count as converged.
bool non_increasing(std::span<const double> values, double floor);

enum class DiskRegion { Inside, Outside, Boundary };
const char* to_string(DiskRegion r) noexcept;

struct DiskSample {
    cplx z;
    DiskRegion region = DiskRegion::Boundary;
    std::vector<double> sigma_by_n;
    bool passed = false;
};

struct DiskScanReport {
    std::string operator_label;
    double spacing = 0.0;
    std::vector<int> n_schedule;
    double predicted_radius = 0.0;
    double norm_at_largest_n = 0.0;
    std::vector<DiskSample> samples;
    int inside_total = 0, inside_passed = 0;
    int outside_total = 0, outside_passed = 0;
    int boundary_total = 0;

    bool passed() const { return inside_passed == inside_total && outside_passed == outside_total; }
};

/// Finite-section witness that sigma(op) is the disk |z| <= predicted_radius.
/// Matrices are assembled at fixed spacing for each N in the schedule.
DiskScanReport disk_scan(const OperatorSpec& op, const Weight& weight, double spacing,
                         std::span<const int> n_schedule, double predicted_radius,
                         std::span<const cplx> samples, const ScanThresholds& thresholds = {});

}  // namespace whlab
