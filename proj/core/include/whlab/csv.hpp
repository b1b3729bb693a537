#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "whlab/grid_function.hpp"
#include "whlab/kernel.hpp"
#include "whlab/spectra.hpp"

namespace whlab::csv {

/// Header "x,re,im", one row per node.
void write_grid_function(std::ostream& os, const GridFunction& f);
/// Reads "x,re,im"; nodes must be midpoints of a uniform grid starting at h/2.
/// FormatError names the first offending data row (1-based).
GridFunction read_grid_function(std::istream& is, const Weight& weight);

/// Header "t,re,im"; t must be uniform with spacing h (the grid spacing).
Kernel read_kernel(std::istream& is, double spacing);
void write_kernel(std::ostream& os, const Kernel& k);

/// Header "z_re,z_im,sigma_min"; failed nodes are written as nan.
void write_pseudospectrum(std::ostream& os, const PseudospectrumGrid& ps);

struct SymbolSample {
    double xi = 0.0;
    double a = 0.0;
    cplx value;
};
/// Header "xi,a,re,im".
void write_symbol_samples(std::ostream& os, std::span<const SymbolSample> samples);

/// Shortest representation that round-trips (%.17g).
std::string format_double(double v);

}  // namespace whlab::csv
