#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace speclab {

struct EigenvalueRow {
    std::uint64_t trial_seed = 0;
    std::complex<double> value = 0.0;
    std::string classification;  // "bulk" or "outlier"
};

// Columns: trial_seed,re,im,modulus,classification. Values round-trip
// bit-exactly through read_eigenvalue_csv.
void write_eigenvalue_csv(std::ostream& os, const std::vector<EigenvalueRow>& rows);
std::vector<EigenvalueRow> read_eigenvalue_csv(std::istream& is);

// Scatter of the spectrum with the theoretical bulk circle and the
// predictions drawn as crosses.
void write_spectrum_svg(std::ostream& os, const std::vector<std::complex<double>>& eigenvalues,
                        double bulk_radius, const std::vector<std::complex<double>>& predicted);

// |q(z)| sampled on a polar grid of the disk |z| <= radius, colored on a log
// scale, with located zeros marked.
void write_limit_surface_svg(std::ostream& os,
                             const std::function<std::complex<double>(std::complex<double>)>& q,
                             double radius, const std::vector<std::complex<double>>& zeros);

}  // namespace speclab
