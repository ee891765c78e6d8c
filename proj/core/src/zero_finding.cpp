#include <algorithm>
#include <cmath>
#include <sstream>

#include "lapack_interop.hpp"
#include "speclab/errors.hpp"
#include "speclab/limit_objects.hpp"

namespace speclab {

namespace {

constexpr double kNewtonResidual = 1e-12;

// Roots of the full-degree polynomial as eigenvalues of its companion matrix.
std::vector<std::complex<double>> companion_roots(const std::vector<std::complex<double>>& coeffs) {
    const long deg = static_cast<long>(coeffs.size()) - 1;
    std::vector<std::complex<double>> comp(static_cast<size_t>(deg) * static_cast<size_t>(deg),
                                           0.0);
    const std::complex<double> lead = coeffs[static_cast<size_t>(deg)];
    for (long i = 0; i + 1 < deg; ++i)
        comp[static_cast<size_t>(i) * static_cast<size_t>(deg) + static_cast<size_t>(i) + 1] = 1.0;
    for (long i = 0; i < deg; ++i)
        comp[static_cast<size_t>(deg - 1) * static_cast<size_t>(deg) + static_cast<size_t>(i)] =
            -coeffs[static_cast<size_t>(i)] / lead;
    return detail::lapack_eigs_complex(comp, deg);
}

}  // namespace

std::vector<std::complex<double>> zeros_in_disk(const TruncatedPowerSeries& series,
                                                double radius) {
    if (series.empty() || series.order() < 1)
        throw ValidationError("zeros_in_disk: series degree must be >= 1");
    if (!(radius > 0.0)) throw ValidationError("zeros_in_disk: radius must be positive");
    if (!(radius < series.validity_radius))
        throw ValidationError("zeros_in_disk: radius must sit inside the validity disk");

    double peak = 0.0;
    for (const auto& c : series.coefficients) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) throw ComputeError("zeros_in_disk: series is numerically zero");

    size_t effective = series.coefficients.size();
    while (effective > 1 &&
           std::abs(series.coefficients[effective - 1]) <= 1e-14 * peak)
        --effective;
    const long deg = static_cast<long>(effective) - 1;

    std::vector<std::complex<double>> roots;
    if (deg >= 1) {
        std::vector<std::complex<double>> coeffs(series.coefficients.begin(),
                                                 series.coefficients.begin() +
                                                     static_cast<long>(effective));
        for (const auto& candidate : companion_roots(coeffs)) {
            if (!(std::abs(candidate) < radius)) continue;
            // Newton polish on the full truncated series.
            std::complex<double> z = candidate;
            std::complex<double> best = z;
            double best_res = std::abs(series.eval(z));
            for (int it = 0; it < 60 && best_res >= kNewtonResidual; ++it) {
                const std::complex<double> dp = series.eval_derivative(z);
                if (dp == 0.0) break;
                z -= series.eval(z) / dp;
                const double res = std::abs(series.eval(z));
                if (res < best_res) {
                    best_res = res;
                    best = z;
                }
            }
            if (std::abs(best) < radius) roots.push_back(best);
        }
    }

    // Argument-principle certificate: winding of series(z) around |z| = radius.
    double winding = 0.0;
    bool stable = false;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (long m = 1 << 10; m <= (1 << 16); m <<= 1) {
        std::complex<double> acc = 0.0;
        for (long j = 0; j < m; ++j) {
            double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m);
            std::complex<double> zj = std::polar(radius, theta);
            std::complex<double> val = series.eval(zj);
            if (std::abs(val) < 1e-13 * peak) {
                // Node collided with a zero on the contour; nudge it.
                theta += 1e-7;
                zj = std::polar(radius, theta);
                val = series.eval(zj);
            }
            acc += zj * series.eval_derivative(zj) / val;
        }
        winding = acc.real() / static_cast<double>(m);
        if (!std::isnan(prev) && std::abs(winding - prev) < 0.01 &&
            std::abs(winding - std::round(winding)) < 0.01) {
            stable = true;
            break;
        }
        prev = winding;
    }
    const long count = std::lround(winding);
    if (!stable && std::abs(winding - static_cast<double>(count)) > 0.01) {
        std::ostringstream os;
        os << "zeros_in_disk: winding integral did not settle (value " << winding << ")";
        throw WindingMismatchError(os.str(), static_cast<long>(roots.size()), count);
    }
    if (count != static_cast<long>(roots.size())) {
        std::ostringstream os;
        os << "zeros_in_disk: found " << roots.size() << " roots but winding count is " << count
           << " (truncation too coarse or a root near the contour)";
        throw WindingMismatchError(os.str(), static_cast<long>(roots.size()), count);
    }

    std::sort(roots.begin(), roots.end(), [](std::complex<double> a, std::complex<double> b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    return roots;
}

namespace {

PredictedOutliers reciprocal_predictions(const TruncatedPowerSeries& c, double bulk) {
    if (c.empty() || std::abs(c.coefficients[0] - 1.0) > 1e-9)
        throw ValidationError("predicted_outliers: reverse characteristic series must start at 1");
    if (!(bulk > 0.0)) throw ValidationError("predicted_outliers: bulk radius must be positive");
    PredictedOutliers out;
    if (c.order() >= 1) {
        for (const auto& w : zeros_in_disk(c, 1.0 / bulk)) out.values.push_back(1.0 / w);
    }
    std::sort(out.values.begin(), out.values.end(),
              [](std::complex<double> a, std::complex<double> b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb) return ma > mb;
                  return std::arg(a) < std::arg(b);
              });
    return out;
}

}  // namespace

PredictedOutliers predicted_outliers(const TruncatedPowerSeries& c,
                                     double bulk_radius_theoretical) {
    return reciprocal_predictions(c, bulk_radius_theoretical);
}

PredictedOutliers predicted_outliers_sparse(const TruncatedPowerSeries& c, double d) {
    if (!(d > 1.0)) throw ValidationError("predicted_outliers_sparse: need d > 1");
    PredictedOutliers out = reciprocal_predictions(c, std::sqrt(d));
    out.values.insert(out.values.begin(), d);  // Perron eigenvalue, multiplicity one
    std::sort(out.values.begin(), out.values.end(),
              [](std::complex<double> a, std::complex<double> b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb) return ma > mb;
                  return std::arg(a) < std::arg(b);
              });
    return out;
}

PredictedOutliers predicted_outliers_semisparse(const TruncatedPowerSeries& c, double dn) {
    if (!(dn > 1.0)) throw ValidationError("predicted_outliers_semisparse: need d_n > 1");
    PredictedOutliers out = reciprocal_predictions(c, 1.0);
    out.escapes_to_infinity = true;
    out.escape_proxy = std::sqrt(dn);
    return out;
}

}  // namespace speclab
