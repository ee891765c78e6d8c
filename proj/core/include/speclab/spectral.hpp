#pragma once

#include <complex>
#include <vector>

#include "speclab/matrix.hpp"
#include "speclab/series.hpp"

namespace speclab {

struct OutlierRule {
    enum class Kind { FixedRadius, LargestGap };
    Kind kind = Kind::FixedRadius;
    double radius = 1.15;         // FixedRadius threshold
    double min_gap_ratio = 1.5;   // LargestGap split requirement
    double bulk_level = 1.0;      // LargestGap: theoretical bulk modulus

    static OutlierRule fixed_radius(double r) { return {Kind::FixedRadius, r, 0.0, 0.0}; }
    static OutlierRule largest_gap(double min_ratio, double bulk_level) {
        return {Kind::LargestGap, 0.0, min_ratio, bulk_level};
    }
};

struct OutlierSplit {
    std::vector<std::complex<double>> bulk;
    std::vector<std::complex<double>> outliers;
    double bulk_radius = 0.0;  // max modulus within the bulk
};

struct SpectrumResult {
    std::vector<std::complex<double>> eigenvalues;  // modulus-descending order
    double bulk_radius = 0.0;
    std::vector<std::complex<double>> outliers;
    std::vector<std::complex<double>> trace_powers;  // Tr(M^k), k = 1..K
};

// All n eigenvalues with multiplicity, sorted by (modulus descending,
// argument ascending). Dense solve is delegated to LAPACK's balanced
// Hessenberg + shifted-QR path; sparse inputs are densified below the
// ceiling.
std::vector<std::complex<double>> eigenvalues(const ModelMatrix& m,
                                              long dense_ceiling = kDefaultDenseCeiling);

// Tr(M^k) for k = 1..K. Dense inputs use two matrix products (M^2, M^3) and
// pairwise contractions up to K = 6, iterated products beyond; sparse inputs
// use repeated CSR multiplication for K <= 6 and densify past that.
std::vector<std::complex<double>> trace_powers(const ModelMatrix& m, int K,
                                               long dense_ceiling = kDefaultDenseCeiling);

// Characteristic coefficients from power traces: det(I - zM) via Newton's
// identities. traces[i] = Tr(M^(i+1)); the returned series has order K.
TruncatedPowerSeries newton_coefficients(const std::vector<std::complex<double>>& traces, int K);

// det(I - zM) by pivoted LU factorization.
std::complex<double> reverse_charpoly_eval(const ModelMatrix& m, std::complex<double> z,
                                           long dense_ceiling = kDefaultDenseCeiling);

OutlierSplit detect_outliers(const std::vector<std::complex<double>>& eigenvalues,
                             const OutlierRule& rule);

// One-stop spectrum: eigensolve, split, trace powers.
SpectrumResult compute_spectrum(const ModelMatrix& m, int K, const OutlierRule& rule,
                                long dense_ceiling = kDefaultDenseCeiling);

}  // namespace speclab
