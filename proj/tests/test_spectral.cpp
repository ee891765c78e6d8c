#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/rng.hpp"
#include "speclab/spectral.hpp"

using namespace speclab;
using cd = std::complex<double>;

namespace {

ModelMatrix random_complex(long n, Rng& rng, double spread = 1.0) {
    ModelMatrix m = ModelMatrix::dense_complex(n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            m.complex_at(i, j) = spread * cd(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
    return m;
}

bool contains_close(const std::vector<cd>& values, cd target, double tol) {
    return std::any_of(values.begin(), values.end(),
                       [&](cd v) { return std::abs(v - target) <= tol; });
}

}  // namespace

TEST_CASE("diagonal matrices return their entries sorted by modulus") {
    const std::vector<cd> diag = {cd(0.5, 0), cd(3, 0), cd(0, 2), cd(-1, 0)};
    ModelMatrix m = ModelMatrix::dense_complex(4);
    for (long i = 0; i < 4; ++i) m.complex_at(i, i) = diag[i];
    const auto eig = eigenvalues(m);
    REQUIRE(eig.size() == 4);
    CHECK(std::abs(eig[0] - cd(3, 0)) < 1e-12);
    CHECK(std::abs(eig[1] - cd(0, 2)) < 1e-12);
    CHECK(std::abs(eig[2] - cd(-1, 0)) < 1e-12);
    CHECK(std::abs(eig[3] - cd(0.5, 0)) < 1e-12);
    for (size_t i = 1; i < eig.size(); ++i) CHECK(std::abs(eig[i]) <= std::abs(eig[i - 1]) + 1e-12);
}

TEST_CASE("companion matrix recovers planted roots") {
    // z^3 - 6z^2 + 11z - 6 = (z-1)(z-2)(z-3).
    ModelMatrix m = ModelMatrix::dense_real(3);
    m.real_at(0, 0) = 6;
    m.real_at(0, 1) = -11;
    m.real_at(0, 2) = 6;
    m.real_at(1, 0) = 1;
    m.real_at(2, 1) = 1;
    const auto eig = eigenvalues(m);
    CHECK(contains_close(eig, cd(1, 0), 1e-10));
    CHECK(contains_close(eig, cd(2, 0), 1e-10));
    CHECK(contains_close(eig, cd(3, 0), 1e-10));
}

TEST_CASE("real rotations keep conjugate eigenvalue pairs") {
    const double theta = 0.7;
    ModelMatrix m = ModelMatrix::dense_real(2);
    m.real_at(0, 0) = std::cos(theta);
    m.real_at(0, 1) = -std::sin(theta);
    m.real_at(1, 0) = std::sin(theta);
    m.real_at(1, 1) = std::cos(theta);
    const auto eig = eigenvalues(m);
    REQUIRE(eig.size() == 2);
    CHECK(contains_close(eig, std::polar(1.0, theta), 1e-12));
    CHECK(contains_close(eig, std::polar(1.0, -theta), 1e-12));
    // Argument-ascending tie break at equal modulus.
    CHECK(std::arg(eig[0]) <= std::arg(eig[1]));
}

TEST_CASE("newton coefficients match the factored characteristic polynomial") {
    Rng rng = make_rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const long n = 6;
        const ModelMatrix m = random_complex(n, rng);
        const auto eig = eigenvalues(m);
        const auto traces = trace_powers(m, static_cast<int>(n));
        const TruncatedPowerSeries p = newton_coefficients(traces, static_cast<int>(n));
        const std::vector<cd> expect = oracle::poly_from_roots(eig);
        REQUIRE(p.coefficients.size() == expect.size());
        for (size_t k = 0; k < expect.size(); ++k)
            CHECK(std::abs(p.coefficients[k] - expect[k]) <= 1e-9 * (1.0 + std::abs(expect[k])));
    }
}

TEST_CASE("newton coefficients past the dimension vanish") {
    Rng rng = make_rng(4);
    const ModelMatrix m = random_complex(3, rng);
    const auto traces = trace_powers(m, 6);
    const TruncatedPowerSeries p = newton_coefficients(traces, 6);
    REQUIRE(p.coefficients.size() == 7);
    for (size_t k = 4; k < 7; ++k) CHECK(std::abs(p.coefficients[k]) < 1e-10);
}

TEST_CASE("reverse characteristic evaluation matches the elimination oracle") {
    Rng rng = make_rng(23);
    const long n = 8;
    const ModelMatrix m = random_complex(n, rng);
    const std::vector<cd> flat = [&] {
        std::vector<cd> out(n * n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) out[i * n + j] = m.entry(i, j);
        return out;
    }();
    Rng zrng = make_rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        const cd z(2 * uniform01(zrng) - 1, 2 * uniform01(zrng) - 1);
        const cd expect = oracle::det_i_minus_zm(flat, n, z);
        CHECK(std::abs(reverse_charpoly_eval(m, z) - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("trace powers agree across storage formats and eigenvalues") {
    Rng rng = make_rng(31);
    const long n = 40;
    const ModelMatrix sparse = sample_sparse_bernoulli(3.0, n, rng);
    const ModelMatrix dense = sparse.densified();
    const int K = 8;
    const auto ts = trace_powers(sparse, K);
    const auto td = trace_powers(dense, K);
    REQUIRE(ts.size() == static_cast<size_t>(K));
    REQUIRE(td.size() == static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) CHECK(std::abs(ts[k] - td[k]) < 1e-8 * (1.0 + std::abs(td[k])));

    const auto eig = eigenvalues(dense);
    for (int k = 1; k <= K; ++k) {
        cd sum = 0;
        for (const cd& lambda : eig) sum += std::pow(lambda, k);
        CHECK(std::abs(ts[k - 1] - sum) < 1e-7 * (1.0 + std::abs(sum)));
    }
}

TEST_CASE("fixed radius rule splits outliers from bulk") {
    const std::vector<cd> eig = {cd(3, 0), cd(0, 2), cd(1.1, 0), cd(-0.9, 0.1), cd(0.2, 0.2)};
    const OutlierSplit split = detect_outliers(eig, OutlierRule::fixed_radius(1.5));
    REQUIRE(split.outliers.size() == 2);
    CHECK(split.outliers[0] == cd(3, 0));
    CHECK(split.outliers[1] == cd(0, 2));
    REQUIRE(split.bulk.size() == 3);
    CHECK(split.bulk_radius == doctest::Approx(1.1));

    const OutlierSplit none = detect_outliers(eig, OutlierRule::fixed_radius(10.0));
    CHECK(none.outliers.empty());
    CHECK(none.bulk_radius == doctest::Approx(3.0));
}

TEST_CASE("outlier detection is scale equivariant") {
    Rng rng = make_rng(2);
    std::vector<cd> eig;
    for (int i = 0; i < 30; ++i) eig.push_back(cd(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1));
    eig.push_back(cd(4, 1));
    std::sort(eig.begin(), eig.end(), [](cd a, cd b) { return std::abs(a) > std::abs(b); });

    const double c = 2.5;
    std::vector<cd> scaled(eig.size());
    std::transform(eig.begin(), eig.end(), scaled.begin(), [&](cd z) { return c * z; });

    const OutlierSplit base = detect_outliers(eig, OutlierRule::fixed_radius(1.5));
    const OutlierSplit scl = detect_outliers(scaled, OutlierRule::fixed_radius(c * 1.5));
    REQUIRE(base.outliers.size() == scl.outliers.size());
    for (size_t i = 0; i < base.outliers.size(); ++i)
        CHECK(std::abs(scl.outliers[i] - c * base.outliers[i]) < 1e-12);
    CHECK(scl.bulk_radius == doctest::Approx(c * base.bulk_radius));
}

TEST_CASE("largest gap rule needs a genuine ratio jump") {
    const std::vector<cd> jump = {cd(3, 0), cd(2.8, 0), cd(1.05, 0), cd(1.0, 0.1), cd(0.5, 0)};
    const OutlierSplit split = detect_outliers(jump, OutlierRule::largest_gap(1.5, 1.0));
    REQUIRE(split.outliers.size() == 2);
    CHECK(split.outliers[1] == cd(2.8, 0));

    const std::vector<cd> flat = {cd(1.2, 0), cd(1.1, 0), cd(1.0, 0), cd(0.9, 0)};
    CHECK(detect_outliers(flat, OutlierRule::largest_gap(1.5, 1.0)).outliers.empty());

    CHECK_THROWS_AS(detect_outliers(flat, OutlierRule::largest_gap(0.9, 1.0)), ValidationError);
}

TEST_CASE("compute_spectrum bundles the pieces consistently") {
    Rng rng = make_rng(7);
    const long n = 30;
    ModelMatrix a = sample_iid_matrix(EntryLaw::standard_real_gaussian(), n, rng);
    const ModelMatrix c = build_perturbation(PerturbationSpec::diagonal_spikes({cd(4, 0)}), n);
    const ModelMatrix m = assemble_model(a, c, ScalingSpec::inv_sqrt_n());

    const SpectrumResult res = compute_spectrum(m, 4, OutlierRule::fixed_radius(2.0));
    REQUIRE(res.eigenvalues.size() == static_cast<size_t>(n));
    REQUIRE(res.trace_powers.size() == 4);
    CHECK(res.outliers.size() >= 1);
    CHECK(std::abs(res.outliers[0] - cd(4, 0)) < 1.0);
    CHECK(res.bulk_radius <= 2.0);
    cd tr = 0;
    for (long i = 0; i < n; ++i) tr += m.entry(i, i);
    CHECK(std::abs(res.trace_powers[0] - tr) < 1e-9 * (1.0 + std::abs(tr)));
}

TEST_CASE("eigensolves above the dense ceiling are refused") {
    Rng rng = make_rng(3);
    const ModelMatrix big = sample_sparse_bernoulli(2.0, 600, rng);
    CHECK_THROWS_AS(eigenvalues(big, 500), ResourceError);
    CHECK_THROWS_AS(compute_spectrum(big, 3, OutlierRule::fixed_radius(1.0), 500), ResourceError);
}
