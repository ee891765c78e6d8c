#include <cmath>
#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "cli_common.hpp"
#include "commands.hpp"
#include "speclab/cycle_oracle.hpp"
#include "speclab/errors.hpp"
#include "speclab/harness.hpp"
#include "speclab/serialize.hpp"

namespace speclab::cli {
namespace {

struct CampaignOpts {
    std::string config_path;
    std::string preset = "acceptance";
    std::uint64_t seed_flag = 0;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    int threads = 0;
    bool no_records = false;
    std::string law;
    long n = 0;
    double d = 0.0;
    double dn_exponent = 0.0;
    std::vector<std::string> spikes;
    std::vector<std::string> entries;
    std::string theta;
    long trials = 0;
    double radius = 0.0;
    double tol = 0.0;
    int K = 0;
    long allow_spurious = 0;
    double min_success = 0.85;
    double max_spurious_rate = 0.1;
    double min_matched = 0.8;
};

ExperimentConfig theorem1_preset(const std::string& preset) {
    ExperimentConfig cfg;
    cfg.regime = Regime::Theorem1;
    cfg.law = standardize_pareto(2.5);
    cfg.n = 1000;
    cfg.trials = 40;
    cfg.master_seed = kDefaultSeed;
    cfg.outlier_rule = OutlierRule::fixed_radius(1.15);
    cfg.match_tolerance = 0.25;
    cfg.K = 6;
    if (preset.empty() || preset == "acceptance") {
        cfg.perturbation = PerturbationSpec::diagonal_spikes({{2.0, 0.0}, {0.0, 1.6}});
    } else if (preset == "subcritical") {
        cfg.perturbation = PerturbationSpec::diagonal_spikes({{0.5, 0.0}});
    } else {
        throw ValidationError("unknown theorem1 preset '" + preset +
                              "' (acceptance | subcritical)");
    }
    return cfg;
}

ExperimentConfig sparse_preset(const std::string& preset) {
    if (!preset.empty() && preset != "acceptance")
        throw ValidationError("unknown sparse preset '" + preset + "' (acceptance)");
    ExperimentConfig cfg;
    cfg.regime = Regime::SparseFixedD;
    cfg.d = 4.0;
    cfg.n = 3000;
    cfg.perturbation = PerturbationSpec::sparse_entries({{1, 1, 3.0}});
    cfg.trials = 20;
    cfg.master_seed = kDefaultSeed;
    cfg.outlier_rule = OutlierRule::fixed_radius(2.3);
    cfg.match_tolerance = 0.3;
    cfg.K = 6;
    return cfg;
}

ExperimentConfig semisparse_preset(const std::string& preset) {
    if (!preset.empty() && preset != "acceptance")
        throw ValidationError("unknown semisparse preset '" + preset + "' (acceptance)");
    ExperimentConfig cfg;
    cfg.regime = Regime::SemiSparse;
    cfg.n = 3000;
    cfg.dn_rule.exponent = 1.0 / 3.0;
    cfg.perturbation = PerturbationSpec::sparse_entries({{1, 1, 2.0}});
    cfg.trials = 10;
    cfg.master_seed = kDefaultSeed;
    cfg.outlier_rule = OutlierRule::fixed_radius(1.2);
    cfg.match_tolerance = 0.3;
    cfg.K = 6;
    return cfg;
}

PerturbationSpec entries_from_strings(const std::vector<std::string>& entries) {
    std::vector<PerturbationEntry> list;
    list.reserve(entries.size());
    for (const auto& e : entries) list.push_back(parse_entry_triple(e));
    return PerturbationSpec::sparse_entries(std::move(list));
}

ExperimentConfig effective_config(const CLI::App* sub, const CampaignOpts& o,
                                  ExperimentConfig cfg) {
    if (!o.config_path.empty()) {
        const Regime expected = cfg.regime;
        cfg = experiment_config_from_json(read_text_file(o.config_path));
        if (cfg.regime != expected)
            throw ValidationError("config regime '" + regime_name(cfg.regime) +
                                  "' does not match the subcommand");
    }
    auto passed = [sub](const std::string& name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (passed("--law")) cfg.law = parse_law(o.law);
    if (passed("--n")) cfg.n = o.n;
    if (passed("--d")) cfg.d = o.d;
    if (passed("--dn-exponent")) cfg.dn_rule.exponent = o.dn_exponent;
    if (passed("--spike")) {
        std::vector<std::complex<double>> thetas;
        for (const auto& s : o.spikes) thetas.push_back(parse_complex(s));
        cfg.perturbation = PerturbationSpec::diagonal_spikes(std::move(thetas));
    }
    if (passed("--entry")) {
        cfg.perturbation = entries_from_strings(o.entries);
    } else if (passed("--theta")) {
        cfg.perturbation = PerturbationSpec::sparse_entries({{1, 1, parse_complex(o.theta)}});
    }
    if (passed("--trials")) cfg.trials = o.trials;
    if (passed("--radius")) cfg.outlier_rule = OutlierRule::fixed_radius(o.radius);
    if (passed("--tol")) cfg.match_tolerance = o.tol;
    if (passed("--K")) cfg.K = o.K;
    if (passed("--allow-spurious")) cfg.spurious_allowance = o.allow_spurious;
    cfg.threads = o.threads;
    cfg.master_seed = resolve_seed(o.seed, cfg.master_seed);
    return cfg;
}

double rule_radius_target(const ExperimentConfig& cfg) {
    if (cfg.outlier_rule.kind == OutlierRule::Kind::FixedRadius) return cfg.outlier_rule.radius;
    return 1.15 * cfg.theoretical_bulk_radius();
}

CampaignResult run_and_report(const CampaignOpts& o, const ExperimentConfig& cfg) {
    CampaignResult result = run_campaign(cfg);
    const auto dir = ensure_out_dir(o.out);
    const auto path = dir / "report.json";
    write_text_file(path, campaign_report_to_json(result, true, !o.no_records));

    const AggregateReport& rep = result.report;
    std::printf("campaign: regime %s, n=%ld, trials=%ld, seed %llu\n",
                regime_name(cfg.regime).c_str(), cfg.n, rep.trials,
                static_cast<unsigned long long>(cfg.master_seed));
    for (const auto& stat : rep.predictions)
        std::printf("prediction %s: matched %ld/%ld, mean distance %.4g, max %.4g\n",
                    format_complex(stat.predicted).c_str(), stat.matched_trials, rep.trials,
                    stat.mean_distance, stat.max_distance);
    std::printf("success %.3f, all matched %.3f, spurious rate %.3f, failed %ld\n",
                rep.success_fraction, rep.all_matched_fraction, rep.spurious_rate,
                rep.failed_trials);
    std::printf("bulk radius mean %.5g max %.5g, escapes %ld/%ld, wall %.1fs\n",
                rep.bulk_radius_mean, rep.bulk_radius_max, rep.escape_count, rep.trials,
                rep.wall_clock_seconds);
    std::printf("wrote %s\n", path.string().c_str());
    return result;
}

int finish(std::vector<GateCheck> gates) {
    const bool pass = report_gates(gates);
    std::printf("%s\n", pass ? "VERIFY PASS" : "VERIFY FAIL");
    return pass ? 0 : 1;
}

int run_theorem1(const CLI::App* sub, const CampaignOpts& o) {
    const ExperimentConfig cfg = effective_config(sub, o, theorem1_preset(o.preset));
    const CampaignResult result = run_and_report(o, cfg);

    std::vector<GateCheck> gates;
    if (o.preset == "subcritical") {
        gates.push_back(
            gate_at_most("spurious_rate", result.report.spurious_rate, o.max_spurious_rate));
    } else {
        gates.push_back(
            gate_at_least("success_fraction", result.report.success_fraction, o.min_success));
        double bulk_max = 0.0;
        long unmatched = 0;
        for (const auto& rec : result.records) {
            if (!rec.success) continue;
            bulk_max = std::max(bulk_max, rec.bulk_radius);
            unmatched += static_cast<long>(rec.matching.unmatched_predicted.size() +
                                           rec.matching.unmatched_observed.size());
        }
        gates.push_back(
            gate_at_most("successful_trial_bulk_max", bulk_max, rule_radius_target(cfg)));
        gates.push_back(gate_at_most("successful_trial_unmatched",
                                     static_cast<double>(unmatched), 0.0));
    }
    return finish(std::move(gates));
}

int run_sparse(const CLI::App* sub, const CampaignOpts& o) {
    const ExperimentConfig cfg = effective_config(sub, o, sparse_preset(o.preset));
    const CampaignResult result = run_and_report(o, cfg);
    std::vector<GateCheck> gates;
    gates.push_back(gate_at_least("all_matched_fraction", result.report.all_matched_fraction,
                                  o.min_matched));
    gates.push_back(
        gate_at_most("bulk_radius_max", result.report.bulk_radius_max, rule_radius_target(cfg)));
    return finish(std::move(gates));
}

int run_semisparse(const CLI::App* sub, const CampaignOpts& o) {
    const ExperimentConfig cfg = effective_config(sub, o, semisparse_preset(o.preset));
    const CampaignResult result = run_and_report(o, cfg);
    const double escape_fraction = result.report.trials > 0
        ? static_cast<double>(result.report.escape_count) / result.report.trials
        : 0.0;
    std::vector<GateCheck> gates;
    gates.push_back(gate_at_least("escape_fraction", escape_fraction, 1.0));
    gates.push_back(gate_at_least("all_matched_fraction", result.report.all_matched_fraction,
                                  o.min_matched));
    gates.push_back(
        gate_at_most("bulk_radius_max", result.report.bulk_radius_max, rule_radius_target(cfg)));
    return finish(std::move(gates));
}

struct MomentsOpts {
    std::string preset = "acceptance";
    std::string law = "rademacher";
    long n = 120;
    std::vector<int> ks = {2, 3};
    long trials = 200;
    double budget = 5e9;
    std::uint64_t seed_flag = 0;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
};

int run_moments(const MomentsOpts& o) {
    if (!o.preset.empty() && o.preset != "acceptance")
        throw ValidationError("unknown moments preset '" + o.preset + "' (acceptance)");
    if (o.ks.empty()) throw ValidationError("need at least one --k");
    const EntryLaw law = parse_law(o.law);
    const std::uint64_t master = resolve_seed(o.seed, kDefaultSeed);
    const auto dir = ensure_out_dir(o.out);

    std::printf("moments: law %s, n=%ld, trials=%ld, seed %llu\n", law.describe().c_str(), o.n,
                o.trials, static_cast<unsigned long long>(master));
    std::vector<GateCheck> gates;
    for (int k : o.ks) {
        const MomentCampaignResult res = moment_campaign_t(law, o.n, k, o.trials, master, o.budget);
        char name[48];
        std::snprintf(name, sizeof(name), "moments_k%d.json", k);
        write_text_file(dir / name, moment_campaign_to_json(res));
        std::printf("k=%d: E|t|^2 = %.6g (se %.2g), E[r] = %s (se %.2g)\n", k,
                    res.t.abs_square.value.real(), res.t.abs_square.std_error,
                    format_complex(res.r.mean.value).c_str(), res.r.mean.std_error);

        char gname[48];
        std::snprintf(gname, sizeof(gname), "t_abs_square_k%d", k);
        gates.push_back(gate_within(gname, res.t.abs_square.value.real(), 1.0 / k, 0.25));
        if (k == 2)
            gates.push_back(
                gate_at_most("r_mean_k2_error", std::abs(res.r.mean.value - 1.0), 0.15));
        if (k == 3)
            gates.push_back(gate_at_most("r_mean_k3_abs", std::abs(res.r.mean.value), 0.1));
    }
    return finish(std::move(gates));
}

struct TracesOpts {
    std::string preset = "acceptance";
    double d = 2.0;
    long n = 2000;
    int kmax = 3;
    long trials = 300;
    double mean_tol = 0.15;
    double var_tol = 0.30;
    std::uint64_t seed_flag = 0;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
};

int run_sparse_traces(const TracesOpts& o) {
    if (!o.preset.empty() && o.preset != "acceptance")
        throw ValidationError("unknown sparse-traces preset '" + o.preset + "' (acceptance)");
    const std::uint64_t master = resolve_seed(o.seed, kDefaultSeed);
    const TraceCampaignResult res = sparse_trace_campaign(o.d, o.n, o.kmax, o.trials, master);
    const auto dir = ensure_out_dir(o.out);
    const auto path = dir / "traces.json";
    write_text_file(path, trace_campaign_to_json(res));

    std::printf("sparse-traces: d=%g, n=%ld, trials=%ld, seed %llu, wall %.1fs\n", o.d, o.n,
                o.trials, static_cast<unsigned long long>(master), res.wall_clock_seconds);
    std::vector<GateCheck> gates;
    for (const auto& row : res.rows) {
        std::printf("k=%d: mean %.5g (target %.5g), variance %.5g (target %.5g)\n", row.k,
                    row.mean, row.target_mean, row.variance, row.target_variance);
        char name[48];
        std::snprintf(name, sizeof(name), "trace_mean_k%d", row.k);
        gates.push_back(gate_within(name, row.mean, row.target_mean, o.mean_tol));
        std::snprintf(name, sizeof(name), "trace_variance_k%d", row.k);
        gates.push_back(gate_within(name, row.variance, row.target_variance, o.var_tol));
    }
    std::printf("wrote %s\n", path.string().c_str());
    return finish(std::move(gates));
}

void add_campaign_flags(CLI::App* sub, const std::shared_ptr<CampaignOpts>& o, Regime regime) {
    sub->add_option("--config", o->config_path, "experiment config JSON (flags override)");
    sub->add_option("--preset", o->preset, "named preset")->capture_default_str();
    sub->add_option("--n", o->n, "matrix dimension");
    if (regime == Regime::Theorem1) {
        sub->add_option("--law", o->law, "entry law, e.g. pareto:2.5");
        sub->add_option("--spike", o->spikes, "diagonal spike (complex, repeatable)");
    }
    if (regime == Regime::SparseFixedD) sub->add_option("--d", o->d, "mean degree");
    if (regime == Regime::SemiSparse)
        sub->add_option("--dn-exponent", o->dn_exponent, "growth d_n = round(n^e)");
    if (regime != Regime::Theorem1) {
        sub->add_option("--theta", o->theta, "single perturbation entry at (1,1)");
        sub->add_option("--entry", o->entries, "perturbation entry row,col,value (repeatable)");
    }
    sub->add_option("--trials", o->trials, "number of trials");
    sub->add_option("--seed", o->seed_flag, "master seed (SPECLAB_SEED overrides)");
    sub->add_option("--radius", o->radius, "fixed outlier threshold");
    sub->add_option("--tol", o->tol, "match tolerance");
    sub->add_option("--K", o->K, "trace/series depth");
    sub->add_option("--threads", o->threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    sub->add_option("--allow-spurious", o->allow_spurious, "unmatched observed allowed per trial");
    sub->add_flag("--no-records", o->no_records, "omit per-trial records from report.json");
    sub->add_option("--out", o->out, "output directory")->capture_default_str();
}

}  // namespace

void register_verify(CLI::App& app, int& exit_code) {
    CLI::App* verify = app.add_subcommand(
        "verify", "Run a verification campaign; exit 0 iff its gates pass");
    verify->require_subcommand(1);

    {
        auto o = std::make_shared<CampaignOpts>();
        CLI::App* sub = verify->add_subcommand(
            "theorem1", "Heavy-tailed i.i.d. matrix with diagonal spikes");
        add_campaign_flags(sub, o, Regime::Theorem1);
        sub->add_option("--min-success", o->min_success, "success fraction gate")
            ->capture_default_str();
        sub->add_option("--max-spurious-rate", o->max_spurious_rate,
                        "spurious rate gate (subcritical preset)")
            ->capture_default_str();
        sub->callback([o, sub, &exit_code] {
            if (sub->count("--seed") > 0) o->seed = o->seed_flag;
            exit_code = run_theorem1(sub, *o);
        });
    }
    {
        auto o = std::make_shared<CampaignOpts>();
        CLI::App* sub = verify->add_subcommand(
            "sparse", "Fixed-degree Bernoulli adjacency with entry perturbation");
        add_campaign_flags(sub, o, Regime::SparseFixedD);
        sub->add_option("--min-matched", o->min_matched, "fully-matched fraction gate")
            ->capture_default_str();
        sub->callback([o, sub, &exit_code] {
            if (sub->count("--seed") > 0) o->seed = o->seed_flag;
            exit_code = run_sparse(sub, *o);
        });
    }
    {
        auto o = std::make_shared<CampaignOpts>();
        CLI::App* sub = verify->add_subcommand(
            "semisparse", "Growing-degree adjacency, scaled, with entry perturbation");
        add_campaign_flags(sub, o, Regime::SemiSparse);
        sub->add_option("--min-matched", o->min_matched, "fully-matched fraction gate")
            ->capture_default_str();
        sub->callback([o, sub, &exit_code] {
            if (sub->count("--seed") > 0) o->seed = o->seed_flag;
            exit_code = run_semisparse(sub, *o);
        });
    }
    {
        auto o = std::make_shared<MomentsOpts>();
        CLI::App* sub = verify->add_subcommand(
            "moments", "Exhaustive cycle-sum moments against the limiting second moments");
        sub->add_option("--preset", o->preset, "named preset")->capture_default_str();
        sub->add_option("--law", o->law, "entry law")->capture_default_str();
        sub->add_option("--n", o->n, "matrix dimension")->capture_default_str();
        sub->add_option("--k", o->ks, "cycle length (repeatable)");
        sub->add_option("--trials", o->trials, "Monte Carlo trials")->capture_default_str();
        sub->add_option("--budget", o->budget, "max n^k * trials tuple operations")
            ->capture_default_str();
        sub->add_option("--seed", o->seed_flag, "master seed (SPECLAB_SEED overrides)");
        sub->add_option("--out", o->out, "output directory")->capture_default_str();
        sub->callback([o, sub, &exit_code] {
            if (sub->count("--seed") > 0) o->seed = o->seed_flag;
            exit_code = run_moments(*o);
        });
    }
    {
        auto o = std::make_shared<TracesOpts>();
        CLI::App* sub = verify->add_subcommand(
            "sparse-traces", "Adjacency trace moments against Poisson cycle-count targets");
        sub->add_option("--preset", o->preset, "named preset")->capture_default_str();
        sub->add_option("--d", o->d, "mean degree")->capture_default_str();
        sub->add_option("--n", o->n, "matrix dimension")->capture_default_str();
        sub->add_option("--kmax", o->kmax, "largest trace power")->capture_default_str();
        sub->add_option("--trials", o->trials, "number of samples")->capture_default_str();
        sub->add_option("--mean-tol", o->mean_tol, "relative mean tolerance")
            ->capture_default_str();
        sub->add_option("--var-tol", o->var_tol, "relative variance tolerance")
            ->capture_default_str();
        sub->add_option("--seed", o->seed_flag, "master seed (SPECLAB_SEED overrides)");
        sub->add_option("--out", o->out, "output directory")->capture_default_str();
        sub->callback([o, sub, &exit_code] {
            if (sub->count("--seed") > 0) o->seed = o->seed_flag;
            exit_code = run_sparse_traces(*o);
        });
    }
}

}  // namespace speclab::cli
