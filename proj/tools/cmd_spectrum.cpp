#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <utility>

#include <CLI11.hpp>

#include "cli_common.hpp"
#include "commands.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/harness.hpp"
#include "speclab/limit_objects.hpp"
#include "speclab/output.hpp"
#include "speclab/rng.hpp"
#include "speclab/spectral.hpp"

namespace speclab::cli {
namespace {

struct SpectrumOpts {
    std::string regime = "theorem1";
    std::string law = "gaussian";
    long n = 0;
    double d = 4.0;
    double dn_exponent = 1.0 / 3.0;
    std::vector<std::string> spikes;
    std::vector<std::string> entries;
    std::uint64_t seed_flag = 0;
    std::optional<std::uint64_t> seed;
    double radius = 0.0;  // 0 -> 1.15 x theoretical bulk
    int K = 6;
    long dense_ceiling = kDefaultDenseCeiling;
    std::string out = "out";
};

PerturbationSpec perturbation_from_flags(const std::vector<std::string>& spikes,
                                         const std::vector<std::string>& entries) {
    if (!spikes.empty() && !entries.empty())
        throw ValidationError("choose either --spike or --entry, not both");
    if (!spikes.empty()) {
        std::vector<std::complex<double>> thetas;
        thetas.reserve(spikes.size());
        for (const auto& s : spikes) thetas.push_back(parse_complex(s));
        return PerturbationSpec::diagonal_spikes(std::move(thetas));
    }
    std::vector<PerturbationEntry> list;
    list.reserve(entries.size());
    for (const auto& e : entries) list.push_back(parse_entry_triple(e));
    return PerturbationSpec::sparse_entries(std::move(list));
}

int run_spectrum(const SpectrumOpts& opts) {
    const Regime regime = regime_from_name(opts.regime);
    if (regime != Regime::Theorem1 && regime != Regime::SparseFixedD &&
        regime != Regime::SemiSparse)
        throw ValidationError("spectrum supports regimes theorem1 | sparse | semisparse");
    if (opts.n < 1) throw ValidationError("--n must be positive");

    const PerturbationSpec spec = perturbation_from_flags(opts.spikes, opts.entries);
    if (spec.min_dimension() > opts.n)
        throw ValidationError("perturbation does not fit in dimension n");

    const std::uint64_t master = resolve_seed(opts.seed, kDefaultSeed);
    const std::uint64_t trial_seed = derive_stream_seed(master, 0);
    Rng rng(trial_seed);

    double bulk_theory = 1.0;
    long dn = 0;
    auto sampled = [&]() -> std::pair<ModelMatrix, ScalingSpec> {
        switch (regime) {
            case Regime::SparseFixedD:
                bulk_theory = std::sqrt(opts.d);
                return {sample_sparse_bernoulli(opts.d, opts.n, rng), ScalingSpec::none()};
            case Regime::SemiSparse:
                dn = DnRule{opts.dn_exponent}.evaluate(opts.n);
                return {sample_sparse_bernoulli(static_cast<double>(dn), opts.n, rng),
                        ScalingSpec::inv_sqrt_dn(static_cast<double>(dn))};
            default:
                return {sample_iid_matrix(parse_law(opts.law), opts.n, rng, opts.dense_ceiling),
                        ScalingSpec::inv_sqrt_n()};
        }
    }();

    const ModelMatrix c = build_perturbation(spec, opts.n);
    const ModelMatrix model = assemble_model(sampled.first, c, sampled.second, opts.dense_ceiling);
    const OutlierRule rule =
        OutlierRule::fixed_radius(opts.radius > 0 ? opts.radius : 1.15 * bulk_theory);
    const SpectrumResult result = compute_spectrum(model, opts.K, rule, opts.dense_ceiling);

    const long rank = std::max<long>(1, spec.rank_bound());
    const int order = static_cast<int>(std::min<long>(opts.n, std::max<long>(opts.K, rank)));
    const TruncatedPowerSeries cseries = reverse_char_of_perturbation(spec, opts.n, order);
    const PredictedOutliers preds = [&] {
        switch (regime) {
            case Regime::SparseFixedD: return predicted_outliers_sparse(cseries, opts.d);
            case Regime::SemiSparse:
                return predicted_outliers_semisparse(cseries, static_cast<double>(dn));
            default: return predicted_outliers(cseries, 1.0);
        }
    }();

    std::vector<EigenvalueRow> rows;
    rows.reserve(result.eigenvalues.size());
    for (std::size_t i = 0; i < result.eigenvalues.size(); ++i)
        rows.push_back({trial_seed, result.eigenvalues[i],
                        i < result.outliers.size() ? "outlier" : "bulk"});

    std::vector<std::complex<double>> crosses = preds.values;
    if (preds.escapes_to_infinity) crosses.push_back(preds.escape_proxy);

    const auto dir = ensure_out_dir(opts.out);
    const auto csv_path = dir / "spectrum.csv";
    const auto svg_path = dir / "spectrum.svg";
    {
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) throw ValidationError("cannot open '" + csv_path.string() + "' for writing");
        write_eigenvalue_csv(os, rows);
    }
    {
        std::ofstream os(svg_path, std::ios::binary);
        if (!os) throw ValidationError("cannot open '" + svg_path.string() + "' for writing");
        write_spectrum_svg(os, result.eigenvalues, result.bulk_radius, crosses);
    }

    std::printf("spectrum: regime %s, n=%ld, master seed %llu, trial seed %llu\n",
                regime_name(regime).c_str(), opts.n, static_cast<unsigned long long>(master),
                static_cast<unsigned long long>(trial_seed));
    if (regime == Regime::SemiSparse) std::printf("d_n = %ld\n", dn);
    std::printf("bulk radius %.6g, outliers %zu:", result.bulk_radius, result.outliers.size());
    for (const auto& z : result.outliers) std::printf(" %s", format_complex(z).c_str());
    std::printf("\npredicted:");
    for (const auto& z : preds.values) std::printf(" %s", format_complex(z).c_str());
    if (preds.escapes_to_infinity)
        std::printf(" escape~%.6g", preds.escape_proxy);
    std::printf("\nwrote %s and %s\n", csv_path.string().c_str(), svg_path.string().c_str());
    return 0;
}

}  // namespace

void register_spectrum(CLI::App& app, int& exit_code) {
    auto opts = std::make_shared<SpectrumOpts>();
    CLI::App* sub = app.add_subcommand(
        "spectrum", "Sample one model matrix; write eigenvalue CSV and an SVG scatter");
    sub->add_option("--regime", opts->regime, "theorem1 | sparse | semisparse")
        ->capture_default_str();
    sub->add_option("--law", opts->law, "entry law (theorem1 regime), e.g. pareto:2.5")
        ->capture_default_str();
    sub->add_option("--n", opts->n, "matrix dimension")->required();
    sub->add_option("--d", opts->d, "mean degree (sparse regime)")->capture_default_str();
    sub->add_option("--dn-exponent", opts->dn_exponent, "semi-sparse growth d_n = round(n^e)")
        ->capture_default_str();
    sub->add_option("--spike", opts->spikes, "diagonal spike (complex, repeatable)");
    sub->add_option("--entry", opts->entries, "perturbation entry row,col,value (repeatable)");
    sub->add_option("--seed", opts->seed_flag, "master seed (SPECLAB_SEED overrides)");
    sub->add_option("--radius", opts->radius, "outlier threshold (default 1.15 x bulk)");
    sub->add_option("--K", opts->K, "trace depth")->capture_default_str();
    sub->add_option("--dense-ceiling", opts->dense_ceiling, "largest dense dimension")
        ->capture_default_str();
    sub->add_option("--out", opts->out, "output directory")->capture_default_str();
    sub->callback([opts, sub, &exit_code] {
        if (sub->count("--seed") > 0) opts->seed = opts->seed_flag;
        exit_code = run_spectrum(*opts);
    });
}

}  // namespace speclab::cli
