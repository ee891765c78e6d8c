#pragma once

#include <complex>
#include <string>
#include <vector>

#include "speclab/series.hpp"

namespace speclab {

// One explicit entry of a finite-support perturbation; indices are 1-based
// (matching the usual matrix notation in configs and reports).
struct PerturbationEntry {
    long row = 1;
    long col = 1;
    std::complex<double> value = 0.0;
};

// Deterministic perturbation C_n, described independently of n so one spec
// instantiates at every size. Supported shapes: explicit sparse entries,
// diagonal spikes, a Jordan block, the uniform mean profile mu/n, and an
// explicit low-rank factorization (accepted as an unproven regime).
class PerturbationSpec {
public:
    enum class Class { SparseEntries, DiagonalSpikes, JordanBlock, FullMean, FactoredLowRank };

    static PerturbationSpec sparse_entries(std::vector<PerturbationEntry> entries);
    static PerturbationSpec diagonal_spikes(std::vector<std::complex<double>> thetas);
    static PerturbationSpec jordan_block(std::complex<double> theta, long size, long offset = 0);
    static PerturbationSpec full_mean(std::complex<double> mu);
    // C = U V^T with U, V given as column lists of a fixed length n.
    static PerturbationSpec factored_low_rank(
        std::vector<std::vector<std::complex<double>>> u_columns,
        std::vector<std::vector<std::complex<double>>> v_columns);

    Class cls() const { return cls_; }
    bool finite_support() const;
    bool is_real() const;
    bool unproven_regime() const { return cls_ == Class::FactoredLowRank; }

    // Uniform-in-n bounds: the largest entry modulus (for FullMean, the
    // constant of the |C_ij| <= mu/n profile) and the nonzero count
    // (finite-support classes only; -1 otherwise).
    double max_entry_modulus() const;
    long nonzero_count() const;
    // Smallest dimension the spec fits into.
    long min_dimension() const;
    long rank_bound() const;

    const std::vector<PerturbationEntry>& entries() const { return entries_; }
    const std::vector<std::complex<double>>& thetas() const { return thetas_; }
    std::complex<double> jordan_theta() const { return jordan_theta_; }
    long jordan_size() const { return jordan_size_; }
    long jordan_offset() const { return jordan_offset_; }
    std::complex<double> mean_mu() const { return mu_; }
    const std::vector<std::vector<std::complex<double>>>& u_columns() const { return u_cols_; }
    const std::vector<std::vector<std::complex<double>>>& v_columns() const { return v_cols_; }

    // All nonzero entries at size n, 1-based, row-major sorted
    // (finite-support classes only).
    std::vector<PerturbationEntry> materialize_entries(long n) const;

    std::string describe() const;

private:
    PerturbationSpec() = default;

    Class cls_ = Class::DiagonalSpikes;
    std::vector<PerturbationEntry> entries_;
    std::vector<std::complex<double>> thetas_;
    std::complex<double> jordan_theta_ = 0.0;
    long jordan_size_ = 0;
    long jordan_offset_ = 0;
    std::complex<double> mu_ = 0.0;
    std::vector<std::vector<std::complex<double>>> u_cols_, v_cols_;
};

}  // namespace speclab
