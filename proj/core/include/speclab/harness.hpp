#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "speclab/entry_law.hpp"
#include "speclab/matrix.hpp"
#include "speclab/perturbation.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

enum class Regime { Theorem1, SparseFixedD, SemiSparse, Moments, SparseTraces };

std::string regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

// Semi-sparse degree growth d_n = round(n^exponent). Exponents above 0.49
// are rejected: the regime needs d_n -> infinity but d_n = n^{o(1)} in
// spirit, and fast-growing rules leave it.
struct DnRule {
    double exponent = 1.0 / 3.0;

    long evaluate(long n) const;
};

struct ExperimentConfig {
    Regime regime = Regime::Theorem1;
    EntryLaw law = EntryLaw::standard_real_gaussian();
    long n = 1000;
    double d = 0.0;  // fixed mean degree (sparse regime)
    DnRule dn_rule;  // degree growth rule (semi-sparse regime)
    PerturbationSpec perturbation = PerturbationSpec::diagonal_spikes({2.0});
    long trials = 1;
    std::uint64_t master_seed = 1;
    OutlierRule outlier_rule = OutlierRule::fixed_radius(1.15);
    double match_tolerance = 0.25;
    int K = 6;                    // trace/series depth
    long spurious_allowance = 0;  // unmatched observed outliers tolerated per trial
    bool record_traces = false;
    int threads = 1;  // 0 = all hardware threads
    long dense_ceiling = kDefaultDenseCeiling;

    void validate() const;
    // 1 for scaled i.i.d. and semi-sparse spectra, sqrt(d) for fixed-d sparse.
    double theoretical_bulk_radius() const;
};

struct MatchPair {
    std::complex<double> predicted;
    std::complex<double> observed;
    double distance = 0.0;
};

struct Matching {
    std::vector<MatchPair> pairs;
    std::vector<std::complex<double>> unmatched_predicted;
    std::vector<std::complex<double>> unmatched_observed;
    double total_distance = 0.0;  // over kept pairs
};

struct TrialRecord {
    long trial_index = 0;
    std::uint64_t derived_seed = 0;
    std::vector<std::complex<double>> observed_outliers;
    std::vector<std::complex<double>> predicted;
    Matching matching;
    double bulk_radius = 0.0;
    double largest_modulus = 0.0;
    std::vector<std::complex<double>> trace_powers;  // filled when record_traces
    bool solver_failed = false;
    std::string failure_reason;
    bool escape_observed = false;  // semi-sparse: top eigenvalue cleared 0.9*sqrt(d_n)
    long spurious_count = 0;
    bool success = false;
};

struct PredictionStat {
    std::complex<double> predicted;
    long matched_trials = 0;
    double mean_distance = 0.0;
    double max_distance = 0.0;
};

struct TraceMomentRow {
    int k = 0;
    std::complex<double> mean = 0.0;
    double mean_std_error = 0.0;
    double variance = 0.0;
    double variance_std_error = 0.0;
    double target_mean = 0.0;
    double target_variance = 0.0;
    bool has_targets = false;
};

struct AggregateReport {
    long trials = 0;
    long failed_trials = 0;
    double success_fraction = 0.0;
    double all_matched_fraction = 0.0;  // every prediction matched, spurious ignored
    std::vector<PredictionStat> predictions;
    double matched_distance_mean = 0.0;
    double matched_distance_max = 0.0;
    double bulk_radius_mean = 0.0;
    double bulk_radius_max = 0.0;
    double spurious_rate = 0.0;  // fraction of trials with any unmatched observed outlier
    double mean_spurious_count = 0.0;
    long escape_count = 0;
    std::vector<TraceMomentRow> trace_moments;
    double wall_clock_seconds = 0.0;
};

struct CampaignResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    AggregateReport report;
};

// One seeded trial: sample, assemble, eigensolve, detect, predict, match.
// Eigensolver failures come back as failed records, not exceptions.
TrialRecord run_trial(const ExperimentConfig& config, long trial_index);

// Minimum-total-distance injective assignment between the two lists
// (exact branch-and-bound; full cardinality first, then pairs beyond the
// tolerance are moved to the unmatched sets).
Matching match_outliers(const std::vector<std::complex<double>>& observed,
                        const std::vector<std::complex<double>>& predicted, double tolerance);

// Fold of completed records; deterministic, timing field left at zero.
AggregateReport aggregate(const std::vector<TrialRecord>& records);

// Full campaign: trials in parallel over derived seeds, then aggregate.
CampaignResult run_campaign(const ExperimentConfig& config);

struct TraceCampaignRow {
    int k = 0;
    double mean = 0.0;
    double mean_std_error = 0.0;
    double variance = 0.0;
    double variance_std_error = 0.0;
    double target_mean = 0.0;
    double target_variance = 0.0;
};

struct TraceCampaignResult {
    long n = 0;
    double d = 0.0;  // fixed degree, or the realized d_n
    bool centered = false;
    int kmax = 0;
    long trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<TraceCampaignRow> rows;
    double wall_clock_seconds = 0.0;
};

// Empirical Tr(A^k) moments for fixed-degree adjacency samples against the
// Poisson cycle-count targets (divisor sums).
TraceCampaignResult sparse_trace_campaign(double d, long n, int kmax, long trials,
                                          std::uint64_t master_seed);

// Same for the growing-degree regime with the centered, scaled statistic
// Tr(A^k)/d_n^{k/2} - d_n^{k/2}; targets are 1 for even k, 0 for odd, with
// variance k.
TraceCampaignResult semisparse_trace_campaign(const DnRule& rule, long n, int kmax, long trials,
                                              std::uint64_t master_seed);

struct MonotonicityDiagnostic {
    std::vector<long> sizes;
    std::vector<double> pooled_mean_distance;  // per size, averaged over repetitions
    int comparisons_non_increasing = 0;
    int comparisons_total = 0;
    bool passed = false;  // at least 2 of the 3 pairwise comparisons improve
};

// Weak convergence proxy: mean matched distance for a single real spike
// theta across increasing sizes, pooled over repetitions.
MonotonicityDiagnostic monotonicity_diagnostic(const EntryLaw& law, double theta,
                                               const std::vector<long>& sizes,
                                               long trials_per_size, int repetitions,
                                               std::uint64_t master_seed);

}  // namespace speclab
