#include "whlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "whlab/errors.hpp"
#include "whlab/linalg.hpp"

namespace whlab {
namespace {

struct LineFit {
    double slope = 0.0;
    double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + fit.slope * (x[i] - mx));
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

Eigen::MatrixXcd shifted_identity(const Eigen::MatrixXcd& m, cplx z) {
    Eigen::MatrixXcd a = -m;
    a.diagonal().array() += z;
    return a;
}

constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)

}  // namespace

GrowthEstimate growth_order(Side side, const Weight& weight, const Grid& grid,
                            std::span<const double> t_values, bool gelfand_check) {
    if (t_values.size() < 3) throw PreconditionError("growth_order needs at least 3 t-values");
    std::vector<double> ts(t_values.begin(), t_values.end());
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end())
        throw PreconditionError("growth_order t-values must be distinct");
    if (ts.back() > grid.extent() / 2 * (1 + 1e-12))
        throw PreconditionError("growth_order needs max t <= X/2");
    for (double t : ts) {
        if (t <= 0.0) throw PreconditionError("growth_order t-values must be positive");
        grid.steps(t);
    }

    GrowthEstimate est;
    est.side = side;
    est.t_values = ts;
    for (double t : ts) est.log_norms.push_back(std::log(exact_shift_norm(side, t, grid, weight)));
    const LineFit fit = fit_line(est.t_values, est.log_norms);
    est.alpha_hat = fit.slope;
    est.residual = fit.rms;

    if (gelfand_check) {
        const double t0 = ts.front();
        const int k = grid.steps(t0);
        const int n_max = std::min(10, grid.count() / k - 1);
        if (n_max >= 3) {
            const OperatorSpec spec =
                side == Side::Right ? OperatorSpec::right_shift(t0) : OperatorSpec::left_shift(t0);
            const GelfandEstimate g = gelfand_radius(assemble_matrix(spec, grid, weight), n_max);
            if (g.radius) est.gelfand_alpha = std::log(*g.radius) / t0;
        }
    }
    return est;
}

GelfandEstimate gelfand_radius(const MatrixOperator& m, int n_max) {
    if (n_max < 3) throw PreconditionError("gelfand_radius needs n_max >= 3");
    GelfandEstimate out;
    Eigen::MatrixXcd power = m.matrix;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) power = power * m.matrix;
        const double norm = linalg::largest_singular_value(power);
        out.power_norms.push_back(norm);
        out.roots.push_back(std::pow(norm, 1.0 / n));
        if (!(norm > 0.0)) out.truncation_dominated = true;
    }
    if (out.truncation_dominated) return out;
    // least-squares slope over the last three n
    const std::size_t last = out.power_norms.size() - 1;
    const double slope = (std::log(out.power_norms[last]) - std::log(out.power_norms[last - 2])) / 2;
    out.radius = std::exp(slope);
    return out;
}

std::vector<cplx> rectangular_nodes(double re_min, double re_max, double im_min, double im_max,
                                    int nx, int ny) {
    if (nx < 1 || ny < 1) throw PreconditionError("rectangular grid needs nx, ny >= 1");
    if (re_max < re_min || im_max < im_min) throw PreconditionError("empty rectangle");
    std::vector<cplx> nodes;
    nodes.reserve(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        const double im = ny == 1 ? im_min : im_min + (im_max - im_min) * iy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double re = nx == 1 ? re_min : re_min + (re_max - re_min) * ix / (nx - 1);
            nodes.emplace_back(re, im);
        }
    }
    return nodes;
}

std::vector<cplx> annulus_nodes(int count, double r_min, double r_max) {
    if (count < 1) throw PreconditionError("need at least one node");
    if (r_min < 0.0 || r_max < r_min) throw PreconditionError("bad annulus radii");
    std::vector<cplx> nodes;
    nodes.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double u = (i + 0.5) / count;
        const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
        nodes.push_back(std::polar(r, kGoldenAngle * i));
    }
    return nodes;
}

std::vector<cplx> disk_nodes(int count, double r_max) { return annulus_nodes(count, 0.0, r_max); }

PseudospectrumGrid pseudospectrum(const MatrixOperator& m, std::span<const cplx> nodes,
                                  unsigned threads) {
    PseudospectrumGrid out;
    out.nodes.assign(nodes.begin(), nodes.end());
    out.sigma_min.assign(nodes.size(), std::numeric_limits<double>::quiet_NaN());
    out.node_errors.assign(nodes.size(), std::string());
    out.matrix_size = m.size();
    out.provenance = m.provenance;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                out.sigma_min[i] =
                    linalg::smallest_singular_value(shifted_identity(m.matrix, nodes[i]));
            } catch (const std::exception& e) {
                out.node_errors[i] = e.what();
            }
        }
    };

    unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, nodes.size()));
    if (n_threads <= 1) {
        work(0, nodes.size());
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (nodes.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(nodes.size(), begin + chunk);
        if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
    return out;
}

ApproxEigenpair approximate_eigenvector(const MatrixOperator& m, cplx z) {
    const auto pair = linalg::minimal_singular_pair(shifted_identity(m.matrix, z));
    IsometricVector u{pair.right};
    return {z, from_isometric(u, m.grid, m.weight), pair.sigma};
}

bool non_increasing(std::span<const double> values, double floor) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= floor) continue;
        if (values[i] > values[i - 1]) return false;
    }
    return true;
}

const char* to_string(DiskRegion r) noexcept {
    switch (r) {
        case DiskRegion::Inside: return "inside";
        case DiskRegion::Outside: return "outside";
        case DiskRegion::Boundary: return "boundary";
    }
    return "?";
}

DiskScanReport disk_scan(const OperatorSpec& op, const Weight& weight, double spacing,
                         std::span<const int> n_schedule, double predicted_radius,
                         std::span<const cplx> samples, const ScanThresholds& thresholds) {
    if (n_schedule.empty()) throw PreconditionError("disk_scan needs an N schedule");
    if (!std::is_sorted(n_schedule.begin(), n_schedule.end()))
        throw PreconditionError("disk_scan N schedule must be increasing");
    if (!(predicted_radius > 0.0)) throw PreconditionError("predicted radius must be positive");

    DiskScanReport rep;
    rep.operator_label = op.describe();
    rep.spacing = spacing;
    rep.n_schedule.assign(n_schedule.begin(), n_schedule.end());
    rep.predicted_radius = predicted_radius;
    for (const cplx& z : samples) rep.samples.push_back({z, DiskRegion::Boundary, {}, false});

    for (int n : n_schedule) {
        const Grid grid = grid_with_spacing(spacing, n);
        const MatrixOperator m = assemble_matrix(op, grid, weight);
        const PseudospectrumGrid ps = pseudospectrum(m, samples);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!ps.node_errors[i].empty()) throw RangeError(ps.node_errors[i]);
            rep.samples[i].sigma_by_n.push_back(ps.sigma_min[i]);
        }
        if (n == n_schedule.back()) rep.norm_at_largest_n = operator_norm(m);
    }

    const double r = predicted_radius;
    for (auto& s : rep.samples) {
        const double mod = std::abs(s.z);
        const double last = s.sigma_by_n.back();
        if (mod <= (1 - thresholds.boundary_band) * r) {
            s.region = DiskRegion::Inside;
            s.passed = last <= thresholds.inside_max && non_increasing(s.sigma_by_n, thresholds.floor);
            ++rep.inside_total;
            rep.inside_passed += s.passed;
        } else if (mod >= (1 + thresholds.boundary_band) * r) {
            s.region = DiskRegion::Outside;
            const double neumann = mod - rep.norm_at_largest_n - thresholds.neumann_slack;
            s.passed = last >= thresholds.outside_factor * (mod - r) && last >= neumann;
            ++rep.outside_total;
            rep.outside_passed += s.passed;
        } else {
            ++rep.boundary_total;
        }
    }
    return rep;
}

}  // namespace whlab
