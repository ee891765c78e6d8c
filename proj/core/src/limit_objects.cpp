#include "speclab/limit_objects.hpp"

#include <cmath>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

void check_rho(std::complex<double> rho) {
    if (std::abs(rho) > 1.0 + 1e-12)
        throw ValidationError("gaussian log series: |rho| cannot exceed 1");
}

// Evaluation stays strictly inside the trusted disk; near-boundary behaviour
// of the square-root factors is deliberately out of bounds.
void check_eval_radius(std::complex<double> z, double validity_radius) {
    if (!(std::abs(z) <= 0.9 * validity_radius)) {
        std::ostringstream os;
        os << "limit evaluation restricted to |z| <= " << 0.9 * validity_radius;
        throw ValidationError(os.str());
    }
}

}  // namespace

LimitSample sample_gaussian_log_series(std::complex<double> rho, int K, Rng& rng) {
    check_rho(rho);
    if (K < 1) throw ValidationError("sample_gaussian_log_series: K must be >= 1");
    const double r = std::min(1.0, std::abs(rho));
    const double phase = std::arg(rho);

    LimitSample sample;
    sample.regime = LimitRegime::IidHeavyTail;
    sample.rho = rho;
    sample.series.coefficients.assign(static_cast<size_t>(K) + 1, 0.0);
    sample.series.validity_radius = 1.0;
    sample.series.sampled = true;
    sample.gaussians.resize(static_cast<size_t>(K));

    for (int k = 1; k <= K; ++k) {
        std::normal_distribution<double> normal;
        const double g1 = normal(rng);
        const double g2 = normal(rng);
        const double rk = std::pow(r, k);
        // rho^k = rk e^{i phi_k}; split the phase evenly across both parts.
        const double phi_k = phase * k;
        const std::complex<double> xk =
            std::polar(1.0, 0.5 * phi_k) *
            std::complex<double>(std::sqrt(0.5 * (1.0 + rk)) * g1,
                                 std::sqrt(std::max(0.0, 0.5 * (1.0 - rk))) * g2);
        sample.gaussians[static_cast<size_t>(k) - 1] = xk;
        sample.series.coefficients[static_cast<size_t>(k)] = xk / static_cast<double>(k);
    }
    return sample;
}

std::complex<double> kappa_eval(std::complex<double> rho, std::complex<double> z) {
    check_rho(rho);
    return std::sqrt(1.0 - rho * z * z);
}

std::complex<double> limit_q_eval(const TruncatedPowerSeries& c, std::complex<double> rho,
                                  const LimitSample& f, std::complex<double> z) {
    if (f.regime != LimitRegime::IidHeavyTail)
        throw ValidationError("limit_q_eval: sample is not an i.i.d.-regime draw");
    check_eval_radius(z, std::min(c.validity_radius, f.series.validity_radius));
    return kappa_eval(rho, z) * c.eval(z) * std::exp(-f.series.eval(z));
}

double poisson_cycle_mean(double d, int k) {
    double tau = 0.0;
    for (int l = 1; l <= k; ++l)
        if (k % l == 0) tau += std::pow(d, l);
    return tau;
}

double poisson_cycle_variance(double d, int k) {
    double v = 0.0;
    for (int l = 1; l <= k; ++l)
        if (k % l == 0) v += l * std::pow(d, l);
    return v;
}

LimitSample sample_poisson_cycle_limit(double d, int K, Rng& rng) {
    if (!(d > 1.0)) throw ValidationError("sample_poisson_cycle_limit: need d > 1");
    if (K < 1) throw ValidationError("sample_poisson_cycle_limit: K must be >= 1");

    LimitSample sample;
    sample.regime = LimitRegime::SparseFixedD;
    sample.d = d;
    sample.series.coefficients.assign(static_cast<size_t>(K) + 1, 0.0);
    sample.series.validity_radius = 1.0 / std::sqrt(d);
    sample.series.sampled = true;
    sample.poisson_counts.resize(static_cast<size_t>(K));

    for (int l = 1; l <= K; ++l) {
        const double mean = std::pow(d, l) / l;
        if (!(mean < 1e15)) {
            std::ostringstream os;
            os << "sample_poisson_cycle_limit: Poisson mean d^" << l << "/" << l
               << " too large to sample";
            throw ComputeError(os.str());
        }
        std::poisson_distribution<long> poisson(mean);
        sample.poisson_counts[static_cast<size_t>(l) - 1] = poisson(rng);
    }
    for (int k = 1; k <= K; ++k) {
        long xk = 0;
        for (int l = 1; l <= k; ++l)
            if (k % l == 0) xk += l * sample.poisson_counts[static_cast<size_t>(l) - 1];
        sample.series.coefficients[static_cast<size_t>(k)] =
            (poisson_cycle_mean(d, k) - static_cast<double>(xk)) / static_cast<double>(k);
    }
    return sample;
}

std::vector<long> poisson_cycle_x(const LimitSample& sample) {
    if (sample.regime != LimitRegime::SparseFixedD)
        throw ValidationError("poisson_cycle_x: sample is not a sparse-regime draw");
    const int K = static_cast<int>(sample.poisson_counts.size());
    std::vector<long> x(static_cast<size_t>(K), 0);
    for (int k = 1; k <= K; ++k)
        for (int l = 1; l <= k; ++l)
            if (k % l == 0)
                x[static_cast<size_t>(k) - 1] +=
                    l * sample.poisson_counts[static_cast<size_t>(l) - 1];
    return x;
}

std::complex<double> sparse_limit_q_eval(const TruncatedPowerSeries& c, double d,
                                         const LimitSample& r, std::complex<double> z, int L) {
    if (r.regime != LimitRegime::SparseFixedD)
        throw ValidationError("sparse_limit_q_eval: sample is not a sparse-regime draw");
    if (L < 1) throw ValidationError("sparse_limit_q_eval: product truncation L must be >= 1");
    check_eval_radius(z, std::min(c.validity_radius, r.series.validity_radius));

    std::complex<double> product = 1.0 - d * z;  // the Perron factor, exact
    std::complex<double> zl = z;
    for (int l = 2; l <= L; ++l) {
        zl *= z;
        product *= std::pow(1.0 - d * zl, 1.0 / l);
    }
    return std::exp(r.series.eval(z)) * c.eval(z) * product;
}

LimitSample sample_semisparse_limit(int K, Rng& rng) {
    if (K < 1) throw ValidationError("sample_semisparse_limit: K must be >= 1");
    LimitSample sample;
    sample.regime = LimitRegime::SemiSparse;
    sample.series.coefficients.assign(static_cast<size_t>(K) + 1, 0.0);
    sample.series.validity_radius = 1.0;
    sample.series.sampled = true;
    sample.gaussians.resize(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k) {
        std::normal_distribution<double> normal;
        const double nk = normal(rng);
        sample.gaussians[static_cast<size_t>(k) - 1] = nk;
        sample.series.coefficients[static_cast<size_t>(k)] = nk / std::sqrt(static_cast<double>(k));
    }
    return sample;
}

std::complex<double> semisparse_q_eval(const TruncatedPowerSeries& c, const LimitSample& g,
                                       std::complex<double> z) {
    if (g.regime != LimitRegime::SemiSparse)
        throw ValidationError("semisparse_q_eval: sample is not a semi-sparse draw");
    check_eval_radius(z, std::min(c.validity_radius, g.series.validity_radius));
    return -z * c.eval(z) * std::sqrt(1.0 - z * z) * std::exp(g.series.eval(z));
}

int default_log_series_order(double radius, double tail_target) {
    if (!(radius > 0.0) || radius >= 1.0)
        throw ValidationError("default_log_series_order: radius must lie in (0,1)");
    if (!(tail_target > 0.0))
        throw ValidationError("default_log_series_order: tail target must be positive");
    for (int K = 1; K <= 100000; ++K)
        if (std::pow(radius, K) / K < tail_target) return K;
    throw ValidationError("default_log_series_order: no feasible truncation order");
}

}  // namespace speclab
