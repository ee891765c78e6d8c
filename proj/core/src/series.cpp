#include "speclab/series.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/errors.hpp"

namespace speclab {

std::complex<double> TruncatedPowerSeries::eval(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

std::complex<double> TruncatedPowerSeries::eval_derivative(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (int k = order(); k >= 1; --k)
        acc = acc * z + static_cast<double>(k) * coefficients[static_cast<size_t>(k)];
    return acc;
}

TruncatedPowerSeries TruncatedPowerSeries::derivative() const {
    TruncatedPowerSeries out;
    out.validity_radius = validity_radius;
    out.sampled = sampled;
    if (coefficients.size() <= 1) {
        out.coefficients = {0.0};
        return out;
    }
    out.coefficients.resize(coefficients.size() - 1);
    for (size_t k = 1; k < coefficients.size(); ++k)
        out.coefficients[k - 1] = static_cast<double>(k) * coefficients[k];
    return out;
}

void TruncatedPowerSeries::trim_trailing(double tol) {
    if (coefficients.size() <= 1) return;
    double peak = 0.0;
    for (const auto& c : coefficients) peak = std::max(peak, std::abs(c));
    const double cut = tol * peak;
    size_t last = coefficients.size();
    while (last > 1 && std::abs(coefficients[last - 1]) <= cut) --last;
    coefficients.resize(last);
}

TruncatedPowerSeries operator*(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    if (a.empty() || b.empty()) throw ValidationError("series product: empty operand");
    TruncatedPowerSeries out;
    out.validity_radius = std::min(a.validity_radius, b.validity_radius);
    out.sampled = a.sampled || b.sampled;
    out.coefficients.assign(a.coefficients.size() + b.coefficients.size() - 1, 0.0);
    for (size_t i = 0; i < a.coefficients.size(); ++i)
        for (size_t j = 0; j < b.coefficients.size(); ++j)
            out.coefficients[i + j] += a.coefficients[i] * b.coefficients[j];
    return out;
}

TruncatedPowerSeries series_exp(const TruncatedPowerSeries& s) {
    if (s.empty()) throw ValidationError("series_exp: empty series");
    if (std::abs(s.coefficients[0]) != 0.0)
        throw ValidationError("series_exp: constant term must vanish");
    TruncatedPowerSeries out;
    out.validity_radius = s.validity_radius;
    out.sampled = s.sampled;
    const int K = s.order();
    out.coefficients.assign(static_cast<size_t>(K) + 1, 0.0);
    out.coefficients[0] = 1.0;
    // k e_k = sum_{j=1}^{k} j s_j e_{k-j}
    for (int k = 1; k <= K; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += static_cast<double>(j) * s.coefficients[static_cast<size_t>(j)] *
                   out.coefficients[static_cast<size_t>(k - j)];
        out.coefficients[static_cast<size_t>(k)] = acc / static_cast<double>(k);
    }
    return out;
}

TruncatedPowerSeries poly_from_inverse_roots(const std::vector<std::complex<double>>& inverse_roots,
                                             int order) {
    if (order < 0) throw ValidationError("poly_from_inverse_roots: negative order");
    std::vector<std::complex<double>> coeffs{1.0};
    coeffs.reserve(inverse_roots.size() + 1);
    for (const auto& r : inverse_roots) {
        coeffs.push_back(0.0);
        for (size_t k = coeffs.size() - 1; k >= 1; --k)
            coeffs[k] -= r * coeffs[k - 1];
    }
    if (static_cast<int>(coeffs.size()) - 1 > order)
        coeffs.resize(static_cast<size_t>(order) + 1);
    return TruncatedPowerSeries{std::move(coeffs)};
}

}  // namespace speclab
