#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/rng.hpp"

using namespace speclab;
using cd = std::complex<double>;

namespace {

std::vector<cd> dense_row_major(const ModelMatrix& m) {
    std::vector<cd> out(m.dim() * m.dim());
    for (long i = 0; i < m.dim(); ++i)
        for (long j = 0; j < m.dim(); ++j) out[i * m.dim() + j] = m.entry(i, j);
    return out;
}

}  // namespace

TEST_CASE("iid sampling is reproducible and law-typed") {
    const EntryLaw law = EntryLaw::rademacher();
    Rng r1 = make_rng(21), r2 = make_rng(21);
    const ModelMatrix a = sample_iid_matrix(law, 12, r1);
    const ModelMatrix b = sample_iid_matrix(law, 12, r2);
    REQUIRE(a.dim() == 12);
    CHECK(a.is_dense());
    CHECK(a.is_real());
    CHECK(!a.provenance.law.empty());
    for (long i = 0; i < 12; ++i)
        for (long j = 0; j < 12; ++j) {
            CHECK(a.entry(i, j) == b.entry(i, j));
            CHECK(std::abs(std::abs(a.entry(i, j).real()) - 1.0) == 0.0);
        }

    Rng r3 = make_rng(21);
    const ModelMatrix c = sample_iid_matrix(EntryLaw::complex_gaussian(cd(0.5, 0)), 6, r3);
    CHECK(!c.is_real());
}

TEST_CASE("iid sampling refuses dimensions above the dense ceiling") {
    Rng rng = make_rng(1);
    CHECK_THROWS_AS(sample_iid_matrix(EntryLaw::rademacher(), 500, rng, 400), ResourceError);
    CHECK_THROWS_AS(sample_iid_matrix(EntryLaw::rademacher(), 0, rng), ValidationError);
}

TEST_CASE("sparse bernoulli adjacency has binomial density and valid structure") {
    Rng rng = make_rng(33);
    const double d = 3.0;
    const long n = 2000;
    const ModelMatrix m = sample_sparse_bernoulli(d, n, rng);
    REQUIRE(!m.is_dense());
    CHECK(m.is_real());
    const CsrStorage& csr = m.csr_storage();
    check_csr(csr, n);
    for (const cd& v : csr.val) CHECK(v == cd(1, 0));

    // nnz ~ Binomial(n^2, d/n): mean d*n, sd ~ sqrt(d*n).
    const double nnz = static_cast<double>(m.stored_nonzeros());
    CHECK(std::abs(nnz - d * n) < 6.0 * std::sqrt(d * n));

    Rng r2 = make_rng(33);
    const ModelMatrix again = sample_sparse_bernoulli(d, n, r2);
    CHECK(again.csr_storage().col == csr.col);

    CHECK_THROWS_AS(sample_sparse_bernoulli(0.0, 100, rng), ValidationError);
    CHECK_THROWS_AS(sample_sparse_bernoulli(200.0, 100, rng), ValidationError);
}

TEST_CASE("perturbation classes materialize their defining entries") {
    const auto spikes = PerturbationSpec::diagonal_spikes({cd(2, 0), cd(-1.5, 0.5)});
    const auto entries = spikes.materialize_entries(10);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].row == 1);
    CHECK(entries[0].col == 1);
    CHECK(entries[0].value == cd(2, 0));
    CHECK(entries[1].row == 2);
    CHECK(entries[1].col == 2);
    CHECK(entries[1].value == cd(-1.5, 0.5));

    const auto jordan = PerturbationSpec::jordan_block(cd(3, 0), 3, 1);
    const auto je = jordan.materialize_entries(10);
    // Rows 2..4 carry theta on the diagonal and ones on the superdiagonal.
    REQUIRE(je.size() == 5);
    CHECK(je[0].row == 2);
    CHECK(je[0].col == 2);
    CHECK(je[0].value == cd(3, 0));
    CHECK(je[1].row == 2);
    CHECK(je[1].col == 3);
    CHECK(je[1].value == cd(1, 0));
    CHECK(je[4].row == 4);
    CHECK(je[4].col == 4);

    CHECK_THROWS_AS(jordan.materialize_entries(3), ValidationError);
    CHECK_THROWS_AS(PerturbationSpec::full_mean(cd(1, 0)).materialize_entries(5), ValidationError);
}

TEST_CASE("built perturbations store the matrices they describe") {
    const long n = 8;

    const ModelMatrix spikes = build_perturbation(PerturbationSpec::diagonal_spikes({cd(2, 0)}), n);
    CHECK(spikes.entry(0, 0) == cd(2, 0));
    CHECK(spikes.entry(1, 1) == cd(0, 0));

    const ModelMatrix entry = build_perturbation(
        PerturbationSpec::sparse_entries({{2, 5, cd(0, 1.5)}}), n);
    CHECK(entry.entry(1, 4) == cd(0, 1.5));
    CHECK(entry.stored_nonzeros() == 1);

    const ModelMatrix mean = build_perturbation(PerturbationSpec::full_mean(cd(2, 0)), n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) CHECK(std::abs(mean.entry(i, j) - cd(0.25, 0)) < 1e-15);

    std::vector<cd> u(n, 0), v(n, 0);
    u[0] = cd(1, 0);
    v[1] = cd(2, 0);
    const auto factored = PerturbationSpec::factored_low_rank({u}, {v});
    CHECK(factored.unproven_regime());
    const ModelMatrix fm = build_perturbation(factored, n);
    CHECK(fm.provenance.unproven_regime);
    CHECK(fm.entry(0, 1) == cd(2, 0));
    CHECK(fm.entry(1, 0) == cd(0, 0));

    const ModelMatrix none = build_perturbation(PerturbationSpec::sparse_entries({}), n);
    CHECK(none.stored_nonzeros() == 0);
    CHECK(none.trace() == cd(0, 0));
}

TEST_CASE("assembly applies the regime scale entrywise") {
    Rng rng = make_rng(9);
    const long n = 6;
    const ModelMatrix a = sample_iid_matrix(EntryLaw::rademacher(), n, rng);
    const ModelMatrix c = build_perturbation(PerturbationSpec::diagonal_spikes({cd(2, 0), cd(-1, 0)}), n);

    const ModelMatrix m = assemble_model(a, c, ScalingSpec::inv_sqrt_n());
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            CHECK(std::abs(m.entry(i, j) - (s * a.entry(i, j) + c.entry(i, j))) < 1e-15);

    const ModelMatrix plain = assemble_model(a, c, ScalingSpec::none());
    CHECK(std::abs(plain.entry(0, 0) - (a.entry(0, 0) + cd(2, 0))) < 1e-15);

    const ModelMatrix dn = assemble_model(a, c, ScalingSpec::inv_sqrt_dn(4.0));
    CHECK(std::abs(dn.entry(0, 1) - 0.5 * a.entry(0, 1)) < 1e-15);
}

TEST_CASE("sparse assembly preserves sparsity and sums traces") {
    Rng rng = make_rng(55);
    const long n = 500;
    const ModelMatrix a = sample_sparse_bernoulli(4.0, n, rng);
    const ModelMatrix c = build_perturbation(PerturbationSpec::sparse_entries({{1, 1, cd(3, 0)}}), n);
    const ModelMatrix m = assemble_model(a, c, ScalingSpec::none());
    CHECK(!m.is_dense());
    check_csr(m.csr_storage(), n);
    CHECK(std::abs(m.trace() - (a.trace() + cd(3, 0))) < 1e-12);
    CHECK(std::abs(m.entry(0, 0) - (a.entry(0, 0) + cd(3, 0))) < 1e-15);
}

TEST_CASE("reverse characteristic series matches the determinant oracle") {
    const long n = 8;
    const std::vector<PerturbationSpec> specs = {
        PerturbationSpec::diagonal_spikes({cd(2, 0), cd(0, 1.6), cd(-0.7, 0.3)}),
        PerturbationSpec::sparse_entries({{1, 2, cd(1, 0)}, {2, 1, cd(4, 0)}, {3, 3, cd(-2, 0)}}),
        PerturbationSpec::jordan_block(cd(1.5, 0), 3, 2),
        PerturbationSpec::full_mean(cd(2.5, 0)),
    };
    for (const auto& spec : specs) {
        const TruncatedPowerSeries series = reverse_char_of_perturbation(spec, n, static_cast<int>(n));
        const ModelMatrix c = build_perturbation(spec, n);
        const std::vector<cd> flat = dense_row_major(c);
        for (cd z : {cd(0.1, 0), cd(-0.2, 0.1), cd(0.3, -0.25), cd(0, 0.4)}) {
            const cd expect = oracle::det_i_minus_zm(flat, n, z);
            CHECK(std::abs(series.eval(z) - expect) < 1e-10 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("two diagonal spikes expand to the frozen quadratic") {
    const TruncatedPowerSeries p = reverse_char_of_perturbation(
        PerturbationSpec::diagonal_spikes({cd(2, 0), cd(-1.5, 0)}), 10, 3);
    REQUIRE(p.order() >= 2);
    CHECK(std::abs(p.coefficients[0] - cd(1, 0)) < 1e-14);
    CHECK(std::abs(p.coefficients[1] - cd(-0.5, 0)) < 1e-14);
    CHECK(std::abs(p.coefficients[2] - cd(-3, 0)) < 1e-14);
    for (size_t k = 3; k < p.coefficients.size(); ++k) CHECK(std::abs(p.coefficients[k]) < 1e-14);
}

TEST_CASE("uniform mean profile has the rank-one reverse characteristic") {
    const TruncatedPowerSeries p =
        reverse_char_of_perturbation(PerturbationSpec::full_mean(cd(2, 0)), 50, 4);
    CHECK(std::abs(p.coefficients[0] - cd(1, 0)) < 1e-13);
    CHECK(std::abs(p.coefficients[1] - cd(-2, 0)) < 1e-13);
    for (size_t k = 2; k < p.coefficients.size(); ++k) CHECK(std::abs(p.coefficients[k]) < 1e-13);
}
