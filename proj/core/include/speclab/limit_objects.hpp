#pragma once

#include <complex>
#include <vector>

#include "speclab/rng.hpp"
#include "speclab/series.hpp"

namespace speclab {

enum class LimitRegime { IidHeavyTail, SparseFixedD, SemiSparse };

// A draw of one of the limiting random analytic objects: the log-series
// (F, the compensated cycle series, or log G) truncated at degree K, plus
// the raw variables behind it so tests can reconstruct everything exactly.
struct LimitSample {
    LimitRegime regime = LimitRegime::IidHeavyTail;
    std::complex<double> rho = 1.0;  // IidHeavyTail second-moment parameter
    double d = 0.0;                  // SparseFixedD mean degree
    TruncatedPowerSeries series;     // log-series, coefficient k = (stored variable)_k / weight_k
    std::vector<std::complex<double>> gaussians;  // X_k or N_k draws
    std::vector<long> poisson_counts;             // Y_l draws (sparse regime)
};

// Independent complex Gaussians X_k with E[X_k]=0, E[|X_k|^2]=1,
// E[X_k^2]=rho^k, assembled into the log-series sum_k X_k z^k / k.
LimitSample sample_gaussian_log_series(std::complex<double> rho, int K, Rng& rng);

// sqrt(1 - rho z^2), principal branch.
std::complex<double> kappa_eval(std::complex<double> rho, std::complex<double> z);

// kappa(z) * c(z) * exp(-F(z)).
std::complex<double> limit_q_eval(const TruncatedPowerSeries& c, std::complex<double> rho,
                                  const LimitSample& f, std::complex<double> z);

// Cycle counts Y_l ~ Poisson(d^l / l), X_k = sum_{l | k} l Y_l, and the
// compensated series sum_k (E[X_k] - X_k) z^k / k.
LimitSample sample_poisson_cycle_limit(double d, int K, Rng& rng);

// Expected cycle count tau_k = sum_{l | k} d^l and the matching variance
// sum_{l | k} l d^l.
double poisson_cycle_mean(double d, int k);
double poisson_cycle_variance(double d, int k);

// X_k = sum_{l | k} l Y_l reconstructed from the stored counts.
std::vector<long> poisson_cycle_x(const LimitSample& sample);

// exp(R(z)) * c(z) * prod_{l<=L} (1 - d z^l)^{1/l}, principal branches.
std::complex<double> sparse_limit_q_eval(const TruncatedPowerSeries& c, double d,
                                         const LimitSample& r, std::complex<double> z, int L);

// G(z) = exp(sum_k N_k z^k / sqrt(k)) from i.i.d. standard real Gaussians.
LimitSample sample_semisparse_limit(int K, Rng& rng);

// -z * c(z) * sqrt(1 - z^2) * G(z).
std::complex<double> semisparse_q_eval(const TruncatedPowerSeries& c, const LimitSample& g,
                                       std::complex<double> z);

// Zeros of the truncated series inside |z| < radius: companion-matrix roots,
// Newton-refined, certified against the argument-principle winding count on
// the circle (throws WindingMismatchError when the two disagree).
std::vector<std::complex<double>> zeros_in_disk(const TruncatedPowerSeries& series, double radius);

struct PredictedOutliers {
    std::vector<std::complex<double>> values;  // finite predictions, includes the Perron value
    bool escapes_to_infinity = false;          // semi-sparse Perron eigenvalue
    double escape_proxy = 0.0;                 // finite-n stand-in sqrt(d_n)
};

// Reciprocals 1/w of the zeros w of c with |w| < 1/bulk_radius_theoretical.
PredictedOutliers predicted_outliers(const TruncatedPowerSeries& c,
                                     double bulk_radius_theoretical);
// Sparse fixed-d regime: the above with bulk sqrt(d), plus the Perron value d.
PredictedOutliers predicted_outliers_sparse(const TruncatedPowerSeries& c, double d);
// Semi-sparse regime: bulk 1, plus the escaping Perron marker with proxy sqrt(d_n).
PredictedOutliers predicted_outliers_semisparse(const TruncatedPowerSeries& c, double dn);

// Smallest K with r^K / K below the tail target at evaluation radius r.
int default_log_series_order(double radius, double tail_target = 1e-6);

}  // namespace speclab
