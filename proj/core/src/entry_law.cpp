#include "speclab/entry_law.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {
namespace {

constexpr double kMomentTol = 1e-12;

// Adaptive Simpson with recursion on the classic |S2 - S1| <= 15 eps rule.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole, double eps,
                   int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
                return left + right + (left + right - whole) / 15.0;
            return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Rec rec{f};
    return rec.run(a, b, fa, fm, fb, whole, eps, 48);
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// E[g^2 1_{|g|<=t}] for standard normal g.
double gauss_square_inside(double t) {
    if (t <= 0.0) return 0.0;
    return std::erf(t / std::sqrt(2.0)) - std::sqrt(2.0 / M_PI) * t * std::exp(-0.5 * t * t);
}

// P(|g| <= t).
double gauss_mass_inside(double t) {
    if (t <= 0.0) return 0.0;
    return std::erf(t / std::sqrt(2.0));
}

}  // namespace

EntryLaw EntryLaw::symmetrized_pareto(double alpha) {
    if (!(alpha > 2.0))
        throw ValidationError("symmetrized_pareto: tail exponent must exceed 2");
    EntryLaw law;
    law.kind_ = LawKind::SymmetrizedPareto;
    law.real_ = true;
    law.alpha_ = alpha;
    law.scale_ = std::sqrt((alpha - 2.0) / alpha);
    law.mean_ = 0.0;
    law.variance_ = 1.0;
    law.square_moment_ = 1.0;
    return law;
}

EntryLaw EntryLaw::rademacher() {
    EntryLaw law;
    law.kind_ = LawKind::Rademacher;
    law.real_ = true;
    law.bound_ = 1.0;
    return law;
}

EntryLaw EntryLaw::standard_real_gaussian() {
    EntryLaw law;
    law.kind_ = LawKind::StandardRealGaussian;
    law.real_ = true;
    return law;
}

EntryLaw EntryLaw::complex_gaussian(std::complex<double> rho) {
    double r = std::abs(rho);
    if (r > 1.0 + 1e-12)
        throw ValidationError("complex_gaussian: |E[a^2]| cannot exceed the variance 1");
    if (r > 1.0) {
        rho /= r;
        r = 1.0;
    }
    EntryLaw law;
    law.kind_ = LawKind::ComplexGaussian;
    law.real_ = false;
    law.rho_ = rho;
    law.square_moment_ = rho;
    law.cg_w1_ = std::sqrt(0.5 * (1.0 + r));
    law.cg_w2_ = std::sqrt(std::max(0.0, 0.5 * (1.0 - r)));
    law.cg_half_phase_ = 0.5 * std::arg(rho);
    return law;
}

EntryLaw EntryLaw::bernoulli_sparse(double d, long n, bool centered) {
    if (n < 1) throw ValidationError("bernoulli_sparse: dimension must be positive");
    const double p = d / static_cast<double>(n);
    if (!(p > 0.0) || !(p < 1.0))
        throw ValidationError("bernoulli_sparse: need 0 < d/n < 1");
    EntryLaw law;
    law.kind_ = LawKind::BernoulliSparse;
    law.real_ = true;
    law.sparse_d_ = d;
    law.sparse_n_ = n;
    law.sparse_centered_ = centered;
    if (centered) {
        law.mean_ = 0.0;
        law.variance_ = 1.0;
        const double sigma = std::sqrt(p * (1.0 - p));
        law.square_moment_ = 1.0;
        law.bound_ = std::max(p, 1.0 - p) / sigma;
    } else {
        law.mean_ = p;
        law.variance_ = p * (1.0 - p);
        law.square_moment_ = p;  // E[a^2] = P(a=1)
        law.bound_ = 1.0;
    }
    return law;
}

EntryLaw EntryLaw::truncated(EntryLaw base, double level) {
    if (!(level > 0.0) || !std::isfinite(level))
        throw ValidationError("truncated: level must be positive and finite");
    auto shared_base = std::make_shared<const EntryLaw>(std::move(base));

    EntryLaw law;
    law.kind_ = LawKind::Truncated;
    law.real_ = shared_base->is_real();
    law.trunc_level_ = level;
    law.base_ = shared_base;

    const TruncationMoments m = truncation_moments(*shared_base, level);
    law.trunc_centering_ = m.first;
    law.mean_ = 0.0;
    law.variance_ = m.abs_square - std::norm(m.first);
    law.square_moment_ = m.square - m.first * m.first;
    if (auto pts = law.atoms()) {
        double peak = 0.0;
        for (const auto& [v, p] : *pts)
            if (p > 0.0) peak = std::max(peak, std::abs(v));
        law.bound_ = peak;
    } else {
        law.bound_ = level + std::abs(m.first);
    }
    return law;
}

bool EntryLaw::is_standardized() const {
    return std::abs(mean_) <= kMomentTol && std::abs(variance_ - 1.0) <= 1e-9;
}

std::complex<double> EntryLaw::sample(Rng& rng) const {
    switch (kind_) {
        case LawKind::SymmetrizedPareto: {
            const double mag = scale_ * std::pow(uniform01_open_left(rng), -1.0 / alpha_);
            return mag * random_sign(rng);
        }
        case LawKind::Rademacher:
            return random_sign(rng);
        case LawKind::StandardRealGaussian: {
            std::normal_distribution<double> normal;
            return normal(rng);
        }
        case LawKind::ComplexGaussian: {
            std::normal_distribution<double> normal;
            const double g1 = normal(rng);
            const double g2 = normal(rng);
            const std::complex<double> body(cg_w1_ * g1, cg_w2_ * g2);
            return std::polar(1.0, cg_half_phase_) * body;
        }
        case LawKind::BernoulliSparse: {
            const double p = sparse_d_ / static_cast<double>(sparse_n_);
            const double edge = uniform01(rng) < p ? 1.0 : 0.0;
            if (!sparse_centered_) return edge;
            return (edge - p) / std::sqrt(p * (1.0 - p));
        }
        case LawKind::Truncated: {
            const std::complex<double> a = base_->sample(rng);
            const std::complex<double> kept = std::abs(a) <= trunc_level_ ? a : 0.0;
            return kept - trunc_centering_;
        }
    }
    throw ComputeError("sample: unreachable law kind");
}

double EntryLaw::pareto_alpha() const {
    if (kind_ != LawKind::SymmetrizedPareto) throw ValidationError("pareto_alpha: wrong law kind");
    return alpha_;
}

double EntryLaw::pareto_scale() const {
    if (kind_ != LawKind::SymmetrizedPareto) throw ValidationError("pareto_scale: wrong law kind");
    return scale_;
}

std::complex<double> EntryLaw::gaussian_correlation() const {
    if (kind_ != LawKind::ComplexGaussian)
        throw ValidationError("gaussian_correlation: wrong law kind");
    return rho_;
}

double EntryLaw::sparse_mean_degree() const {
    if (kind_ != LawKind::BernoulliSparse)
        throw ValidationError("sparse_mean_degree: wrong law kind");
    return sparse_d_;
}

long EntryLaw::sparse_dimension() const {
    if (kind_ != LawKind::BernoulliSparse)
        throw ValidationError("sparse_dimension: wrong law kind");
    return sparse_n_;
}

bool EntryLaw::sparse_centered() const {
    if (kind_ != LawKind::BernoulliSparse)
        throw ValidationError("sparse_centered: wrong law kind");
    return sparse_centered_;
}

double EntryLaw::truncation_level() const {
    if (kind_ != LawKind::Truncated) throw ValidationError("truncation_level: wrong law kind");
    return trunc_level_;
}

const EntryLaw& EntryLaw::truncation_base() const {
    if (kind_ != LawKind::Truncated) throw ValidationError("truncation_base: wrong law kind");
    return *base_;
}

std::optional<std::vector<std::pair<std::complex<double>, double>>> EntryLaw::atoms() const {
    using Atoms = std::vector<std::pair<std::complex<double>, double>>;
    switch (kind_) {
        case LawKind::Rademacher:
            return Atoms{{1.0, 0.5}, {-1.0, 0.5}};
        case LawKind::BernoulliSparse: {
            const double p = sparse_d_ / static_cast<double>(sparse_n_);
            if (!sparse_centered_) return Atoms{{1.0, p}, {0.0, 1.0 - p}};
            const double sigma = std::sqrt(p * (1.0 - p));
            return Atoms{{(1.0 - p) / sigma, p}, {-p / sigma, 1.0 - p}};
        }
        case LawKind::Truncated: {
            auto base_atoms = base_->atoms();
            if (!base_atoms) return std::nullopt;
            Atoms out;
            out.reserve(base_atoms->size());
            for (const auto& [v, p] : *base_atoms) {
                const std::complex<double> kept = std::abs(v) <= trunc_level_ ? v : 0.0;
                out.emplace_back(kept - trunc_centering_, p);
            }
            return out;
        }
        default:
            return std::nullopt;
    }
}

TruncationMoments truncation_moments(const EntryLaw& law, double level) {
    if (!(level > 0.0)) throw ValidationError("truncation_moments: level must be positive");
    TruncationMoments out;

    if (auto pts = law.atoms()) {
        for (const auto& [v, p] : *pts) {
            if (std::abs(v) > level) continue;
            out.first += p * v;
            out.abs_square += p * std::norm(v);
            out.square += p * v * v;
            out.mass += p;
        }
        return out;
    }

    switch (law.kind()) {
        case LawKind::SymmetrizedPareto: {
            const double alpha = law.pareto_alpha();
            const double c = law.pareto_scale();
            if (level < c) return out;  // support starts at |x| = c
            out.mass = 1.0 - std::pow(c / level, alpha);
            const double s2 = alpha / (alpha - 2.0) *
                              (c * c - std::pow(c, alpha) * std::pow(level, 2.0 - alpha));
            out.abs_square = s2;
            out.square = s2;
            return out;
        }
        case LawKind::StandardRealGaussian: {
            out.mass = gauss_mass_inside(level);
            out.abs_square = gauss_square_inside(level);
            out.square = out.abs_square;
            return out;
        }
        case LawKind::ComplexGaussian: {
            const double r = std::abs(law.gaussian_correlation());
            const double w1 = std::sqrt(0.5 * (1.0 + r));
            const double w2 = std::sqrt(std::max(0.0, 0.5 * (1.0 - r)));
            const std::complex<double> phase = std::polar(1.0, std::arg(law.gaussian_correlation()));
            double i1 = 0.0, i2 = 0.0, mass = 0.0;
            if (w2 <= 1e-14) {
                // Degenerate |rho| = 1: a is a rotated real gaussian.
                i1 = gauss_square_inside(level / w1);
                mass = gauss_mass_inside(level / w1);
            } else {
                const double y_max = std::min(level / w2, 40.0);
                auto half_width = [&](double y) {
                    const double rad = level * level - w2 * w2 * y * y;
                    return rad <= 0.0 ? 0.0 : std::sqrt(rad) / w1;
                };
                i1 = 2.0 * adaptive_simpson(
                                [&](double y) { return std_normal_pdf(y) * gauss_square_inside(half_width(y)); },
                                0.0, y_max, 1e-11);
                i2 = 2.0 * adaptive_simpson(
                                [&](double y) { return y * y * std_normal_pdf(y) * gauss_mass_inside(half_width(y)); },
                                0.0, y_max, 1e-11);
                mass = 2.0 * adaptive_simpson(
                                [&](double y) { return std_normal_pdf(y) * gauss_mass_inside(half_width(y)); },
                                0.0, y_max, 1e-11);
            }
            out.mass = mass;
            out.abs_square = w1 * w1 * i1 + w2 * w2 * i2;
            out.square = phase * (w1 * w1 * i1 - w2 * w2 * i2);
            return out;
        }
        case LawKind::Truncated: {
            // b = a 1_{|a|<=L} - c with c = 0 for symmetric continuous bases,
            // so nested truncation reduces to the smaller level plus the mass
            // parked at zero.
            const EntryLaw& base = law.truncation_base();
            const double inner = law.truncation_level();
            const TruncationMoments full = truncation_moments(base, inner);
            if (std::abs(full.first) > 1e-10)
                throw ValidationError("truncation_moments: unsupported asymmetric nested truncation");
            const TruncationMoments tight = truncation_moments(base, std::min(inner, level));
            out = tight;
            out.mass = tight.mass + (1.0 - full.mass);  // zeroed-out tail lands inside
            return out;
        }
        default:
            throw ComputeError("truncation_moments: unreachable law kind");
    }
}

std::string EntryLaw::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case LawKind::SymmetrizedPareto:
            os << "pareto(" << alpha_ << ")";
            break;
        case LawKind::Rademacher:
            os << "rademacher";
            break;
        case LawKind::StandardRealGaussian:
            os << "gauss";
            break;
        case LawKind::ComplexGaussian:
            os << "cgauss(" << rho_.real() << (rho_.imag() < 0 ? "-" : "+")
               << std::abs(rho_.imag()) << "i)";
            break;
        case LawKind::BernoulliSparse:
            os << "bernoulli(d=" << sparse_d_ << ",n=" << sparse_n_
               << (sparse_centered_ ? ",centered" : "") << ")";
            break;
        case LawKind::Truncated:
            os << "trunc(" << base_->describe() << "," << trunc_level_ << ")";
            break;
    }
    return os.str();
}

EntryLaw standardize_pareto(double alpha) { return EntryLaw::symmetrized_pareto(alpha); }

EntryLaw truncate_law(const EntryLaw& base, double level) {
    return EntryLaw::truncated(base, level);
}

}  // namespace speclab
