#pragma once

#include "speclab/entry_law.hpp"
#include "speclab/matrix.hpp"
#include "speclab/perturbation.hpp"
#include "speclab/rng.hpp"
#include "speclab/series.hpp"

namespace speclab {

// n x n dense matrix of i.i.d. draws from the law (unscaled).
ModelMatrix sample_iid_matrix(const EntryLaw& law, long n, Rng& rng,
                              long dense_ceiling = kDefaultDenseCeiling);

// Adjacency-style CSR matrix: each entry independently 1 with probability d/n.
ModelMatrix sample_sparse_bernoulli(double d, long n, Rng& rng);

// Materializes the perturbation at size n (sparse storage for finite support,
// factored storage for the uniform mean profile).
ModelMatrix build_perturbation(const PerturbationSpec& spec, long n);

// Coefficients of det(I - zC_n) up to degree K, exact in the finitely many
// nonzero entries; the degree never exceeds the rank of C_n.
TruncatedPowerSeries reverse_char_of_perturbation(const PerturbationSpec& spec, long n, int K);

// scale(A) * A + C with the scale factor chosen by the regime tag.
ModelMatrix assemble_model(const ModelMatrix& a, const ModelMatrix& c, ScalingSpec scaling,
                           long dense_ceiling = kDefaultDenseCeiling);

}  // namespace speclab
