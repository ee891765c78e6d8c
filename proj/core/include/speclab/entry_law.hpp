#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speclab/rng.hpp"

namespace speclab {

enum class LawKind {
    SymmetrizedPareto,
    Rademacher,
    StandardRealGaussian,
    ComplexGaussian,
    BernoulliSparse,
    Truncated,
};

// Scalar distribution for matrix entries, carrying exact first and second
// moments alongside the sampler so verification code never has to estimate
// them from draws.
class EntryLaw {
public:
    // Symmetric density ~ |x|^(-alpha-1) on |x| >= scale, rescaled to unit
    // variance. Requires alpha > 2.
    static EntryLaw symmetrized_pareto(double alpha);
    static EntryLaw rademacher();
    static EntryLaw standard_real_gaussian();
    // Standardized complex law with E[a^2] = rho, |rho| <= 1.
    static EntryLaw complex_gaussian(std::complex<double> rho);
    // Bernoulli(d/n) edge indicator; centered=true rescales to mean 0, var 1.
    static EntryLaw bernoulli_sparse(double d, long n, bool centered);
    // a 1_{|a|<=level} minus its mean.
    static EntryLaw truncated(EntryLaw base, double level);

    LawKind kind() const { return kind_; }

    std::complex<double> mean() const { return mean_; }
    double variance() const { return variance_; }
    // E[a^2] (not |a|^2); the second-moment parameter the limit objects need.
    std::complex<double> square_moment() const { return square_moment_; }
    bool is_real() const { return real_; }
    bool is_standardized() const;
    // Largest achievable |a|, when finite.
    std::optional<double> bound() const { return bound_; }

    std::complex<double> sample(Rng& rng) const;

    double pareto_alpha() const;                    // SymmetrizedPareto
    double pareto_scale() const;                    // SymmetrizedPareto
    std::complex<double> gaussian_correlation() const;  // ComplexGaussian
    double sparse_mean_degree() const;              // BernoulliSparse
    long sparse_dimension() const;                  // BernoulliSparse
    bool sparse_centered() const;                   // BernoulliSparse
    double truncation_level() const;                // Truncated
    const EntryLaw& truncation_base() const;        // Truncated

    // Exact atoms (value, probability) for laws with finite support.
    std::optional<std::vector<std::pair<std::complex<double>, double>>> atoms() const;

    std::string describe() const;

private:
    EntryLaw() = default;

    LawKind kind_ = LawKind::Rademacher;
    bool real_ = true;
    std::complex<double> mean_ = 0.0;
    double variance_ = 1.0;
    std::complex<double> square_moment_ = 1.0;
    std::optional<double> bound_;

    double alpha_ = 0.0;
    double scale_ = 0.0;
    std::complex<double> rho_ = 1.0;
    double cg_w1_ = 0.0, cg_w2_ = 0.0, cg_half_phase_ = 0.0;
    double sparse_d_ = 0.0;
    long sparse_n_ = 0;
    bool sparse_centered_ = false;
    double trunc_level_ = 0.0;
    std::complex<double> trunc_centering_ = 0.0;
    std::shared_ptr<const EntryLaw> base_;
};

// Moments of a 1_{|a|<=level} under a standardized law.
struct TruncationMoments {
    std::complex<double> first = 0.0;        // E[a 1]
    double abs_square = 0.0;                 // E[|a|^2 1]
    std::complex<double> square = 0.0;       // E[a^2 1]
    double mass = 0.0;                       // P(|a| <= level)
};
TruncationMoments truncation_moments(const EntryLaw& law, double level);

// Convenience spellings used throughout the toolkit.
EntryLaw standardize_pareto(double alpha);
EntryLaw truncate_law(const EntryLaw& base, double level);
inline std::complex<double> sample_entry(const EntryLaw& law, Rng& rng) { return law.sample(rng); }
inline std::complex<double> square_moment(const EntryLaw& law) { return law.square_moment(); }

}  // namespace speclab
