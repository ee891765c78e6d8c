#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "speclab/cycle_oracle.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/entry_law.hpp"
#include "speclab/limit_objects.hpp"
#include "speclab/rng.hpp"
#include "speclab/series.hpp"
#include "speclab/spectral.hpp"

using namespace speclab;

static void BM_DenseEigensolve(benchmark::State& state) {
    const long n = state.range(0);
    Rng rng = make_rng(17);
    const ModelMatrix m = sample_iid_matrix(EntryLaw::standard_real_gaussian(), n, rng);
    for (auto _ : state) {
        auto eig = eigenvalues(m);
        benchmark::DoNotOptimize(eig.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_DenseEigensolve)->RangeMultiplier(2)->Range(64, 1024)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SparseTracePowers(benchmark::State& state) {
    const long n = state.range(0);
    Rng rng = make_rng(23);
    const ModelMatrix m = sample_sparse_bernoulli(4.0, n, rng);
    for (auto _ : state) {
        auto tr = trace_powers(m, 6);
        benchmark::DoNotOptimize(tr.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SparseTracePowers)->RangeMultiplier(4)->Range(256, 16384)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_TupleEnumeration(benchmark::State& state) {
    const long n = state.range(0);
    const int k = static_cast<int>(state.range(1));
    Rng rng = make_rng(31);
    std::vector<long long> a(static_cast<size_t>(n) * n);
    for (auto& v : a) v = uniform01(rng) < 0.5 ? -1 : 1;
    for (auto _ : state) {
        auto sums = tuple_sums_int(a, n, k);
        benchmark::DoNotOptimize(&sums);
    }
}
BENCHMARK(BM_TupleEnumeration)->Args({8, 4})->Args({10, 4})->Args({12, 4})->Args({8, 5})->Args({10, 5})->Args({8, 6});

static void BM_NewtonCoefficients(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    Rng rng = make_rng(41);
    std::vector<std::complex<double>> traces(static_cast<size_t>(K));
    for (auto& t : traces) t = {2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1};
    for (auto _ : state) {
        auto series = newton_coefficients(traces, K);
        benchmark::DoNotOptimize(series.coefficients.data());
    }
}
BENCHMARK(BM_NewtonCoefficients)->RangeMultiplier(2)->Range(8, 128);

static void BM_ZerosInDisk(benchmark::State& state) {
    const int deg = static_cast<int>(state.range(0));
    Rng rng = make_rng(53);
    std::vector<std::complex<double>> inv_roots(static_cast<size_t>(deg));
    for (auto& r : inv_roots) {
        const double mod = 0.15 + 0.7 * uniform01(rng);
        const double arg = 6.283185307179586 * uniform01(rng);
        r = std::polar(1.0 / mod, arg);
    }
    const TruncatedPowerSeries poly = poly_from_inverse_roots(inv_roots, deg);
    for (auto _ : state) {
        auto zeros = zeros_in_disk(poly, 0.9);
        benchmark::DoNotOptimize(zeros.data());
    }
}
BENCHMARK(BM_ZerosInDisk)->DenseRange(2, 12, 2);

BENCHMARK_MAIN();
