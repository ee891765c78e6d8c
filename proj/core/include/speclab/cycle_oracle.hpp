#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "speclab/entry_law.hpp"
#include "speclab/matrix.hpp"

namespace speclab {

// Guard rails for the O(n^k) exhaustive enumerations.
struct OracleCaps {
    long max_n = 12;
    int max_k = 6;
};

struct TupleSums {
    std::complex<double> distinct_sum = 0.0;  // tuples with k distinct indices
    std::complex<double> repeated_sum = 0.0;  // everything else
};

// Exact enumeration of a_{i1 i2} ... a_{ik i1} over all k-tuples, split by
// whether the tuple visits k distinct indices. The two parts always add up
// to Tr(A^k).
TupleSums tuple_sums(const ModelMatrix& a, int k, OracleCaps caps = {});

struct TupleSumsInt {
    long long distinct_sum = 0;
    long long repeated_sum = 0;
};

// Same enumeration in 64-bit integer arithmetic with overflow detection;
// row-major entry array.
TupleSumsInt tuple_sums_int(const std::vector<long long>& a, long n, int k, OracleCaps caps = {});

struct TraceDecomposition {
    int k = 0;
    std::complex<double> pure_a = 0.0;          // all edges from A
    std::complex<double> pure_c = 0.0;          // all edges from scale*C
    std::complex<double> mixed_distinct = 0.0;  // both sources, k distinct indices
    std::complex<double> mixed_repeated = 0.0;  // both sources, repeated index
    std::complex<double> distinct_sum = 0.0;    // pure-A split, distinct tuples
    std::complex<double> repeated_sum = 0.0;    // pure-A split, the rest
};

// Multilinear expansion of Tr((A + scale*C)^k): every edge slot picks the A
// entry or the scale*C entry; monomials are classified by source mix and
// index distinctness. Components sum to the full trace exactly.
TraceDecomposition mixed_trace_decomposition(const ModelMatrix& a, const ModelMatrix& c,
                                             double scale, int k, OracleCaps caps = {});

struct PerturbedCycleSums {
    std::complex<double> t_part = 0.0;  // tuples with all indices distinct
    std::complex<double> r_part = 0.0;  // tuples with a repeated index
};

// Sums of a-products over (k-ell)-tuples that contain support_vertex
// (1-based), split by distinctness. Callers apply any scalar prefactor.
PerturbedCycleSums perturbed_cycle_sums(const ModelMatrix& a, long support_vertex, int k, int ell,
                                        OracleCaps caps = {});

struct MomentStat {
    std::complex<double> value = 0.0;
    double std_error = 0.0;
};

struct CampaignMoments {
    MomentStat mean;        // E[s]
    MomentStat abs_square;  // E[|s|^2]
    MomentStat square;      // E[s^2]
};

struct MomentCampaignResult {
    long n = 0;
    int k = 0;
    long trials = 0;
    // t: cycle-normalized distinct sum (tuple sum / k) / n^(k/2);
    // r: repeated-index tuple sum / n^(k/2).
    CampaignMoments t;
    CampaignMoments r;
};

// Monte Carlo moments of the normalized cycle statistics over fresh i.i.d.
// matrices; one derived seed stream per trial.
MomentCampaignResult moment_campaign_t(const EntryLaw& law, long n, int k, long trials,
                                       std::uint64_t master_seed, double tuple_budget = 5e9);

}  // namespace speclab
