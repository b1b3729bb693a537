#include "whlab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "whlab/errors.hpp"

namespace whlab::csv {
namespace {

struct Row {
    std::size_t number = 0;  // 1-based data row
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_field(const std::string& field, std::size_t row) {
    const std::string f = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw FormatError("row " + std::to_string(row) + ": cannot parse '" + f + "' as a number",
                          row);
    }
    return v;
}

std::vector<Row> read_rows(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty CSV, expected header '" + header + "'");
    std::string got = trim(line);
    got.erase(std::remove(got.begin(), got.end(), ' '), got.end());
    if (got != header) throw FormatError("expected header '" + header + "', got '" + got + "'");
    std::vector<Row> rows;
    std::size_t number = 0;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        ++number;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) {
            throw FormatError("row " + std::to_string(number) + ": expected 3 fields, got " +
                                  std::to_string(fields.size()),
                              number);
        }
        rows.push_back({number, parse_field(fields[0], number), parse_field(fields[1], number),
                        parse_field(fields[2], number)});
    }
    if (rows.empty()) throw FormatError("CSV has a header but no data rows");
    return rows;
}

// First row whose coordinate breaks the uniform step `h` from rows[0].
void check_uniform(const std::vector<Row>& rows, double h, const char* what) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double expected = rows[0].c0 + static_cast<double>(i) * h;
        if (std::abs(rows[i].c0 - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            throw FormatError("row " + std::to_string(rows[i].number) + ": non-uniform " + what +
                                  " spacing (" + format_double(rows[i].c0) + ", expected " +
                                  format_double(expected) + ")",
                              rows[i].number);
        }
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_grid_function(std::ostream& os, const GridFunction& f) {
    os << "x,re,im\n";
    for (int j = 0; j < f.size(); ++j) {
        const cplx v = f.samples()[j];
        os << format_double(f.grid().node(j)) << ',' << format_double(v.real()) << ','
           << format_double(v.imag()) << '\n';
    }
}

GridFunction read_grid_function(std::istream& is, const Weight& weight) {
    const auto rows = read_rows(is, "x,re,im");
    if (rows.size() < 2) throw FormatError("grid function needs at least two rows");
    // h from the first node keeps the spacing exact for grids written by us
    const double h = 2.0 * rows[0].c0;
    if (!(h > 0.0)) throw FormatError("row 1: first node must be positive", 1);
    const double step = rows[1].c0 - rows[0].c0;
    if (std::abs(step - h) > 1e-9 * h) {
        throw FormatError("row 1: first node " + format_double(rows[0].c0) +
                              " is not the midpoint h/2 of the step " + format_double(step),
                          1);
    }
    check_uniform(rows, h, "node");
    const int n = static_cast<int>(rows.size());
    Eigen::VectorXcd s(n);
    for (int j = 0; j < n; ++j) s[j] = cplx(rows[j].c1, rows[j].c2);
    return GridFunction(build_grid(n * h, n), weight, std::move(s));
}

Kernel read_kernel(std::istream& is, double spacing) {
    const auto rows = read_rows(is, "t,re,im");
    check_uniform(rows, spacing, "kernel");
    const double first = rows[0].c0 / spacing;
    if (std::abs(first - std::round(first)) > 1e-9 * std::max(1.0, std::abs(first))) {
        throw FormatError("row 1: kernel offset " + format_double(rows[0].c0) +
                              " is not a multiple of h = " + format_double(spacing),
                          1);
    }
    std::vector<cplx> samples;
    samples.reserve(rows.size());
    for (const auto& r : rows) samples.emplace_back(r.c1, r.c2);
    return Kernel(spacing, static_cast<int>(std::lround(first)), std::move(samples));
}

void write_kernel(std::ostream& os, const Kernel& k) {
    os << "t,re,im\n";
    for (int d = k.first_offset(); d <= k.last_offset(); ++d) {
        const cplx v = k.at_offset(d);
        os << format_double(d * k.spacing()) << ',' << format_double(v.real()) << ','
           << format_double(v.imag()) << '\n';
    }
}

void write_pseudospectrum(std::ostream& os, const PseudospectrumGrid& ps) {
    os << "z_re,z_im,sigma_min\n";
    for (std::size_t i = 0; i < ps.nodes.size(); ++i) {
        os << format_double(ps.nodes[i].real()) << ',' << format_double(ps.nodes[i].imag()) << ','
           << format_double(ps.node_errors[i].empty() ? ps.sigma_min[i]
                                                       : std::numeric_limits<double>::quiet_NaN())
           << '\n';
    }
}

void write_symbol_samples(std::ostream& os, std::span<const SymbolSample> samples) {
    os << "xi,a,re,im\n";
    for (const auto& s : samples) {
        os << format_double(s.xi) << ',' << format_double(s.a) << ',' << format_double(s.value.real())
           << ',' << format_double(s.value.imag()) << '\n';
    }
}

}  // namespace whlab::csv
