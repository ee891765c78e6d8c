#pragma once

#include <complex>
#include <limits>
#include <vector>

namespace speclab {

// Power series around 0 kept to finite order, with the radius inside which
// the truncation is trusted. Sampled limit objects carry finite radii;
// exact polynomials are valid everywhere.
struct TruncatedPowerSeries {
    std::vector<std::complex<double>> coefficients;  // c_0 .. c_K
    double validity_radius = std::numeric_limits<double>::infinity();
    bool sampled = false;  // true when coefficients came from random draws

    TruncatedPowerSeries() = default;
    explicit TruncatedPowerSeries(std::vector<std::complex<double>> coeffs,
                                  double radius = std::numeric_limits<double>::infinity(),
                                  bool sampled = false)
        : coefficients(std::move(coeffs)), validity_radius(radius), sampled(sampled) {}

    int order() const { return static_cast<int>(coefficients.size()) - 1; }
    bool empty() const { return coefficients.empty(); }

    std::complex<double> eval(std::complex<double> z) const;
    std::complex<double> eval_derivative(std::complex<double> z) const;

    TruncatedPowerSeries derivative() const;

    // Drops trailing coefficients below tol * max|c_k|, never below order 0.
    void trim_trailing(double tol);
};

TruncatedPowerSeries operator*(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b);

// exp(s) as a truncated series via the standard recurrence
// (exp(s))' = s' exp(s); requires s.coefficients[0] == 0.
TruncatedPowerSeries series_exp(const TruncatedPowerSeries& s);

// Series with coefficients of a polynomial prod_i (1 - z r_i), any order cap.
TruncatedPowerSeries poly_from_inverse_roots(const std::vector<std::complex<double>>& inverse_roots,
                                             int order);

}  // namespace speclab
