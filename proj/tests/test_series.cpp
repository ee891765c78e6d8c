#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "oracles.hpp"
#include "speclab/errors.hpp"
#include "speclab/rng.hpp"
#include "speclab/series.hpp"

using namespace speclab;
using cd = std::complex<double>;

static_assert(avalanche64(1) != 1, "finalizer must not be the identity");
static_assert(derive_stream_seed(7, 0) != derive_stream_seed(7, 1));

TEST_CASE("stream seeds are distinct across indices and masters") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t master : {0ull, 1ull, 20260817ull, ~0ull})
        for (std::uint64_t i = 0; i < 2048; ++i) seen.insert(derive_stream_seed(master, i));
    CHECK(seen.size() == 4 * 2048);
    CHECK(derive_stream_seed(42, 5) == derive_stream_seed(42, 5));
}

TEST_CASE("uniform01 stays inside its half-open interval") {
    Rng rng = make_rng(11);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.01);

    Rng rng2 = make_rng(12);
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01_open_left(rng2);
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}

TEST_CASE("random signs are balanced") {
    Rng rng = make_rng(3);
    long sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double s = random_sign(rng);
        REQUIRE((s == 1.0 || s == -1.0));
        sum += static_cast<long>(s);
    }
    CHECK(std::abs(sum) < 1500);
}

TEST_CASE("series evaluation matches the naive power sum") {
    TruncatedPowerSeries s;
    s.coefficients = {cd(1, 0), cd(-0.5, 0.25), cd(0, 2), cd(3, -1), cd(-0.125, 0)};
    for (cd z : {cd(0, 0), cd(0.3, 0), cd(-0.2, 0.7), cd(1, 1)}) {
        cd naive = 0, pw = 1;
        for (const cd& c : s.coefficients) {
            naive += c * pw;
            pw *= z;
        }
        CHECK(std::abs(s.eval(z) - naive) <= 1e-14 * (1.0 + std::abs(naive)));

        cd dnaive = 0;
        pw = 1;
        for (size_t k = 1; k < s.coefficients.size(); ++k) {
            dnaive += static_cast<double>(k) * s.coefficients[k] * pw;
            pw *= z;
        }
        CHECK(std::abs(s.eval_derivative(z) - dnaive) <= 1e-13 * (1.0 + std::abs(dnaive)));
    }
}

TEST_CASE("derivative shifts and scales coefficients") {
    TruncatedPowerSeries s;
    s.coefficients = {cd(4, 0), cd(1, -1), cd(0, 3), cd(2, 2)};
    s.validity_radius = 0.75;
    const TruncatedPowerSeries d = s.derivative();
    REQUIRE(d.coefficients.size() == 3);
    CHECK(d.coefficients[0] == cd(1, -1));
    CHECK(d.coefficients[1] == 2.0 * cd(0, 3));
    CHECK(d.coefficients[2] == 3.0 * cd(2, 2));
    CHECK(d.validity_radius == 0.75);
}

TEST_CASE("trim_trailing drops negligible tails but keeps order zero") {
    TruncatedPowerSeries s;
    s.coefficients = {cd(1, 0), cd(2, 0), cd(1e-18, 0), cd(0, 0)};
    s.trim_trailing(1e-12);
    CHECK(s.coefficients.size() == 2);

    TruncatedPowerSeries tiny;
    tiny.coefficients = {cd(0, 0), cd(0, 0)};
    tiny.trim_trailing(1e-12);
    CHECK(tiny.coefficients.size() == 1);
}

TEST_CASE("series product is the coefficient convolution") {
    TruncatedPowerSeries a, b;
    a.coefficients = {cd(1, 0), cd(1, 0)};
    b.coefficients = {cd(1, 0), cd(-1, 0)};
    const TruncatedPowerSeries p = a * b;
    REQUIRE(p.coefficients.size() == 3);
    CHECK(p.coefficients[0] == cd(1, 0));
    CHECK(std::abs(p.coefficients[1]) == 0.0);
    CHECK(p.coefficients[2] == cd(-1, 0));

    a.validity_radius = 0.5;
    CHECK((a * b).validity_radius == 0.5);

    Rng rng = make_rng(99);
    TruncatedPowerSeries u, v;
    for (int i = 0; i < 6; ++i) u.coefficients.push_back(cd(uniform01(rng) - 0.5, uniform01(rng) - 0.5));
    for (int i = 0; i < 4; ++i) v.coefficients.push_back(cd(uniform01(rng) - 0.5, uniform01(rng) - 0.5));
    const TruncatedPowerSeries w = u * v;
    REQUIRE(w.order() == u.order() + v.order());
    for (cd z : {cd(0.4, 0.1), cd(-0.3, -0.6)})
        CHECK(std::abs(w.eval(z) - u.eval(z) * v.eval(z)) < 1e-13);
}

TEST_CASE("series_exp reproduces the exponential coefficients") {
    const cd a(0.7, -0.3);
    TruncatedPowerSeries s;
    s.coefficients = {cd(0, 0), a, cd(0, 0), cd(0, 0), cd(0, 0), cd(0, 0), cd(0, 0), cd(0, 0)};
    const TruncatedPowerSeries e = series_exp(s);
    REQUIRE(e.coefficients.size() == s.coefficients.size());
    cd expect = 1.0;
    for (size_t k = 0; k < e.coefficients.size(); ++k) {
        CHECK(std::abs(e.coefficients[k] - expect) < 1e-14);
        expect *= a / static_cast<double>(k + 1);
    }
    const cd z(0.5, 0.25);
    CHECK(std::abs(e.eval(z) - std::exp(a * z)) < 1e-6);

    TruncatedPowerSeries bad;
    bad.coefficients = {cd(1, 0), cd(1, 0)};
    CHECK_THROWS_AS(series_exp(bad), ValidationError);
}

TEST_CASE("poly_from_inverse_roots multiplies out its linear factors") {
    const std::vector<cd> roots = {cd(2, 0), cd(-1.5, 0), cd(0, 1)};
    const TruncatedPowerSeries p = poly_from_inverse_roots(roots, 3);
    const std::vector<cd> expect = oracle::poly_from_roots(roots);
    REQUIRE(p.coefficients.size() == expect.size());
    for (size_t k = 0; k < expect.size(); ++k)
        CHECK(std::abs(p.coefficients[k] - expect[k]) < 1e-13);

    const TruncatedPowerSeries cut = poly_from_inverse_roots(roots, 1);
    REQUIRE(cut.coefficients.size() == 2);
    CHECK(std::abs(cut.coefficients[1] - expect[1]) < 1e-13);
}
