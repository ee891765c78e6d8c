#include "speclab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/limit_objects.hpp"
#include "speclab/rng.hpp"

namespace speclab {

namespace {

// A semi-sparse trial only counts the escaping Perron eigenvalue as present
// when the top modulus clears this fraction of sqrt(d_n).
constexpr double kEscapeFactor = 0.9;

using Complex = std::complex<double>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MeanVar {
    double mean = 0.0;
    double mean_std_error = 0.0;
    double variance = 0.0;
    double variance_std_error = 0.0;
};

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar out;
    const double t = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / t;
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.variance = ss / (t - 1.0);
    out.mean_std_error = std::sqrt(out.variance / t);
    double y_mean = ss / t;
    double y_ss = 0.0;
    for (double x : xs) {
        const double y = (x - out.mean) * (x - out.mean);
        y_ss += (y - y_mean) * (y - y_mean);
    }
    out.variance_std_error = std::sqrt(y_ss / (t - 1.0) / t);
    return out;
}

}  // namespace

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::Theorem1: return "theorem1";
        case Regime::SparseFixedD: return "sparse";
        case Regime::SemiSparse: return "semisparse";
        case Regime::Moments: return "moments";
        case Regime::SparseTraces: return "sparse-traces";
    }
    throw ValidationError("unknown regime");
}

Regime regime_from_name(const std::string& name) {
    if (name == "theorem1") return Regime::Theorem1;
    if (name == "sparse") return Regime::SparseFixedD;
    if (name == "semisparse") return Regime::SemiSparse;
    if (name == "moments") return Regime::Moments;
    if (name == "sparse-traces") return Regime::SparseTraces;
    throw ValidationError("unknown regime name: " + name);
}

long DnRule::evaluate(long n) const {
    if (n < 1) throw ValidationError("matrix dimension must be >= 1");
    if (!(exponent > 0.0) || exponent > 0.49)
        throw ValidationError("degree growth exponent must lie in (0, 0.49]");
    const long dn = std::lround(std::pow(static_cast<double>(n), exponent));
    if (dn < 2) throw ValidationError("degree rule gives d_n < 2 at n=" + std::to_string(n));
    if (dn >= n) throw ValidationError("degree rule gives d_n >= n");
    return dn;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (n < 1) throw ValidationError("matrix dimension must be >= 1");
    if (!(match_tolerance > 0.0)) throw ValidationError("match tolerance must be positive");
    if (K < 1) throw ValidationError("trace depth must be >= 1");
    if (spurious_allowance < 0) throw ValidationError("spurious allowance must be >= 0");
    if (dense_ceiling < 1) throw ValidationError("dense ceiling must be >= 1");
    if (perturbation.min_dimension() > n)
        throw ValidationError("perturbation does not fit inside dimension n=" + std::to_string(n));
    switch (regime) {
        case Regime::Theorem1:
            if (!law.is_standardized())
                throw ValidationError(
                    "scaled i.i.d. regime requires a standardized entry law (mean 0, variance 1)");
            break;
        case Regime::SparseFixedD:
            if (!(d > 1.0)) throw ValidationError("sparse regime requires mean degree d > 1");
            if (d >= static_cast<double>(n)) throw ValidationError("mean degree must satisfy d < n");
            break;
        case Regime::SemiSparse:
            dn_rule.evaluate(n);
            break;
        case Regime::Moments:
        case Regime::SparseTraces:
            break;  // dedicated entry points revalidate
    }
}

double ExperimentConfig::theoretical_bulk_radius() const {
    if (regime == Regime::SparseFixedD) return std::sqrt(d);
    return 1.0;
}

Matching match_outliers(const std::vector<Complex>& observed, const std::vector<Complex>& predicted,
                        double tolerance) {
    if (!(tolerance >= 0.0)) throw ValidationError("match tolerance must be nonnegative");
    Matching out;
    const int p = static_cast<int>(predicted.size());
    const int m = static_cast<int>(observed.size());
    if (p == 0 || m == 0) {
        out.unmatched_predicted = predicted;
        out.unmatched_observed = observed;
        return out;
    }

    std::vector<double> dist(static_cast<size_t>(p) * static_cast<size_t>(m));
    std::vector<double> row_min(static_cast<size_t>(p), std::numeric_limits<double>::infinity());
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < m; ++j) {
            const double dij = std::abs(predicted[static_cast<size_t>(i)] -
                                        observed[static_cast<size_t>(j)]);
            dist[static_cast<size_t>(i * m + j)] = dij;
            row_min[static_cast<size_t>(i)] = std::min(row_min[static_cast<size_t>(i)], dij);
        }

    // When every prediction will be assigned, the sum of row minima bounds the
    // remaining cost from below.
    std::vector<double> tail_bound(static_cast<size_t>(p) + 1, 0.0);
    if (p <= m)
        for (int i = p - 1; i >= 0; --i)
            tail_bound[static_cast<size_t>(i)] =
                tail_bound[static_cast<size_t>(i) + 1] + row_min[static_cast<size_t>(i)];

    std::vector<int> assign(static_cast<size_t>(p), -1);
    std::vector<int> best_assign;
    std::vector<char> used(static_cast<size_t>(m), 0);
    double best = std::numeric_limits<double>::infinity();

    const int skip_budget = std::max(0, p - m);
    auto dfs = [&](auto&& self, int i, double partial, int skips_left) -> void {
        if (i == p) {
            if (partial < best) {
                best = partial;
                best_assign = assign;
            }
            return;
        }
        if (partial + tail_bound[static_cast<size_t>(i)] >= best) return;
        for (int j = 0; j < m; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            used[static_cast<size_t>(j)] = 1;
            assign[static_cast<size_t>(i)] = j;
            self(self, i + 1, partial + dist[static_cast<size_t>(i * m + j)], skips_left);
            used[static_cast<size_t>(j)] = 0;
        }
        if (skips_left > 0) {
            assign[static_cast<size_t>(i)] = -1;
            self(self, i + 1, partial, skips_left - 1);
        }
        assign[static_cast<size_t>(i)] = -1;
    };
    dfs(dfs, 0, 0.0, skip_budget);

    std::vector<char> observed_kept(static_cast<size_t>(m), 0);
    for (int i = 0; i < p; ++i) {
        const int j = best_assign[static_cast<size_t>(i)];
        const double dij = (j >= 0) ? dist[static_cast<size_t>(i * m + j)]
                                    : std::numeric_limits<double>::infinity();
        if (j >= 0 && dij <= tolerance) {
            out.pairs.push_back({predicted[static_cast<size_t>(i)],
                                 observed[static_cast<size_t>(j)], dij});
            out.total_distance += dij;
            observed_kept[static_cast<size_t>(j)] = 1;
        } else {
            out.unmatched_predicted.push_back(predicted[static_cast<size_t>(i)]);
        }
    }
    for (int j = 0; j < m; ++j)
        if (!observed_kept[static_cast<size_t>(j)])
            out.unmatched_observed.push_back(observed[static_cast<size_t>(j)]);
    return out;
}

TrialRecord run_trial(const ExperimentConfig& config, long trial_index) {
    config.validate();
    if (config.regime == Regime::Moments || config.regime == Regime::SparseTraces)
        throw ValidationError("trace/moment regimes run through their dedicated campaigns");

    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.derived_seed = derive_stream_seed(config.master_seed, static_cast<std::uint64_t>(trial_index));
    Rng rng(rec.derived_seed);

    const long n = config.n;
    const int series_order = static_cast<int>(
        std::min<long>(n, std::max<long>(config.K, std::max<long>(1, config.perturbation.rank_bound()))));
    const TruncatedPowerSeries cseries =
        reverse_char_of_perturbation(config.perturbation, n, series_order);

    long dn = 0;
    PredictedOutliers preds;
    ScalingSpec scaling = ScalingSpec::none();
    switch (config.regime) {
        case Regime::Theorem1:
            preds = predicted_outliers(cseries, 1.0);
            scaling = ScalingSpec::inv_sqrt_n();
            break;
        case Regime::SparseFixedD:
            preds = predicted_outliers_sparse(cseries, config.d);
            scaling = ScalingSpec::none();
            break;
        case Regime::SemiSparse:
            dn = config.dn_rule.evaluate(n);
            preds = predicted_outliers_semisparse(cseries, static_cast<double>(dn));
            scaling = ScalingSpec::inv_sqrt_dn(static_cast<double>(dn));
            break;
        default:
            break;
    }
    rec.predicted = preds.values;

    ModelMatrix a = (config.regime == Regime::Theorem1)
                        ? sample_iid_matrix(config.law, n, rng, config.dense_ceiling)
                        : sample_sparse_bernoulli(
                              config.regime == Regime::SparseFixedD ? config.d
                                                                    : static_cast<double>(dn),
                              n, rng);
    ModelMatrix c = build_perturbation(config.perturbation, n);
    ModelMatrix model = assemble_model(a, c, scaling, config.dense_ceiling);

    std::vector<Complex> eigs;
    try {
        eigs = eigenvalues(model, config.dense_ceiling);
    } catch (const EigensolveError& e) {
        rec.solver_failed = true;
        rec.failure_reason = e.what();
        return rec;
    }
    if (config.record_traces) rec.trace_powers = trace_powers(model, config.K, config.dense_ceiling);

    OutlierSplit split = detect_outliers(eigs, config.outlier_rule);
    rec.bulk_radius = split.bulk_radius;
    rec.largest_modulus = eigs.empty() ? 0.0 : std::abs(eigs.front());
    std::vector<Complex> observed = split.outliers;

    if (config.regime == Regime::SemiSparse) {
        const double threshold = kEscapeFactor * std::sqrt(static_cast<double>(dn));
        rec.escape_observed = rec.largest_modulus >= threshold;
        if (rec.escape_observed && !observed.empty() &&
            std::abs(observed.front()) >= threshold) {
            observed.erase(observed.begin());
        }
    }

    rec.observed_outliers = observed;
    rec.matching = match_outliers(observed, rec.predicted, config.match_tolerance);
    rec.spurious_count = static_cast<long>(rec.matching.unmatched_observed.size());
    rec.success = rec.matching.unmatched_predicted.empty() &&
                  rec.spurious_count <= config.spurious_allowance &&
                  (config.regime != Regime::SemiSparse || rec.escape_observed);
    return rec;
}

AggregateReport aggregate(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw ValidationError("cannot aggregate an empty record list");

    AggregateReport rep;
    rep.trials = static_cast<long>(records.size());
    const double t = static_cast<double>(rep.trials);

    // Prediction table keyed by the (deterministic) predicted values.
    for (const auto& rec : records) {
        if (rec.predicted.empty()) continue;
        for (const auto& value : rec.predicted) rep.predictions.push_back({value, 0, 0.0, 0.0});
        break;
    }

    long success = 0, all_matched = 0, spurious_trials = 0;
    double spurious_total = 0.0;
    double dist_sum = 0.0;
    long dist_count = 0;
    double bulk_sum = 0.0;
    long bulk_count = 0;
    for (const auto& rec : records) {
        if (rec.success) ++success;
        if (rec.solver_failed) {
            ++rep.failed_trials;
            continue;
        }
        if (rec.matching.unmatched_predicted.empty()) ++all_matched;
        if (rec.spurious_count > 0) ++spurious_trials;
        spurious_total += static_cast<double>(rec.spurious_count);
        if (rec.escape_observed) ++rep.escape_count;
        bulk_sum += rec.bulk_radius;
        ++bulk_count;
        rep.bulk_radius_max = std::max(rep.bulk_radius_max, rec.bulk_radius);
        for (const auto& pair : rec.matching.pairs) {
            dist_sum += pair.distance;
            ++dist_count;
            rep.matched_distance_max = std::max(rep.matched_distance_max, pair.distance);
            for (auto& stat : rep.predictions) {
                if (stat.predicted == pair.predicted) {
                    ++stat.matched_trials;
                    stat.mean_distance += pair.distance;
                    stat.max_distance = std::max(stat.max_distance, pair.distance);
                    break;
                }
            }
        }
    }
    rep.success_fraction = static_cast<double>(success) / t;
    rep.all_matched_fraction = static_cast<double>(all_matched) / t;
    rep.spurious_rate = static_cast<double>(spurious_trials) / t;
    rep.mean_spurious_count = spurious_total / t;
    rep.matched_distance_mean = dist_count > 0 ? dist_sum / static_cast<double>(dist_count) : 0.0;
    if (bulk_count > 0) rep.bulk_radius_mean = bulk_sum / static_cast<double>(bulk_count);
    for (auto& stat : rep.predictions)
        if (stat.matched_trials > 0) stat.mean_distance /= static_cast<double>(stat.matched_trials);

    // Trace moment table across trials that carried trace powers.
    size_t depth = 0;
    for (const auto& rec : records)
        if (!rec.solver_failed) depth = std::max(depth, rec.trace_powers.size());
    for (size_t ki = 0; ki < depth; ++ki) {
        std::vector<Complex> xs;
        for (const auto& rec : records)
            if (!rec.solver_failed && rec.trace_powers.size() > ki) xs.push_back(rec.trace_powers[ki]);
        TraceMomentRow row;
        row.k = static_cast<int>(ki + 1);
        Complex sum = 0.0;
        for (const auto& x : xs) sum += x;
        row.mean = sum / static_cast<double>(xs.size());
        if (xs.size() >= 2) {
            double ss = 0.0;
            for (const auto& x : xs) ss += std::norm(x - row.mean);
            row.variance = ss / (static_cast<double>(xs.size()) - 1.0);
            row.mean_std_error = std::sqrt(row.variance / static_cast<double>(xs.size()));
            const double y_mean = ss / static_cast<double>(xs.size());
            double y_ss = 0.0;
            for (const auto& x : xs) {
                const double y = std::norm(x - row.mean);
                y_ss += (y - y_mean) * (y - y_mean);
            }
            row.variance_std_error =
                std::sqrt(y_ss / (static_cast<double>(xs.size()) - 1.0) / static_cast<double>(xs.size()));
        }
        rep.trace_moments.push_back(row);
    }
    return rep;
}

CampaignResult run_campaign(const ExperimentConfig& config) {
    config.validate();
    if (config.regime == Regime::Moments || config.regime == Regime::SparseTraces)
        throw ValidationError("trace/moment regimes run through their dedicated campaigns");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TrialRecord> records(static_cast<size_t>(config.trials));

    long thread_count = config.threads;
    if (thread_count <= 0) thread_count = static_cast<long>(std::thread::hardware_concurrency());
    thread_count = std::max<long>(1, std::min<long>(thread_count, config.trials));

    std::atomic<long> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= config.trials) break;
            try {
                records[static_cast<size_t>(i)] = run_trial(config, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                break;
            }
        }
    };
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(thread_count));
        for (long i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CampaignResult result;
    result.config = config;
    result.records = std::move(records);
    result.report = aggregate(result.records);
    result.report.wall_clock_seconds = seconds_since(t0);
    return result;
}

TraceCampaignResult sparse_trace_campaign(double d, long n, int kmax, long trials,
                                          std::uint64_t master_seed) {
    if (kmax < 1 || kmax > 6) throw ValidationError("trace depth must lie in [1, 6]");
    if (trials < 2) throw ValidationError("variance estimates need at least 2 trials");
    if (!(d > 0.0) || d >= static_cast<double>(n)) throw ValidationError("need 0 < d < n");
    const double cost = static_cast<double>(trials) * static_cast<double>(n) * static_cast<double>(n);
    if (cost > 5e10) throw ResourceError("trace campaign budget exceeded");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> samples(static_cast<size_t>(kmax));
    for (long trial = 0; trial < trials; ++trial) {
        Rng rng(derive_stream_seed(master_seed, static_cast<std::uint64_t>(trial)));
        ModelMatrix a = sample_sparse_bernoulli(d, n, rng);
        const auto traces = trace_powers(a, kmax, n);
        for (int k = 1; k <= kmax; ++k)
            samples[static_cast<size_t>(k - 1)].push_back(traces[static_cast<size_t>(k - 1)].real());
    }

    TraceCampaignResult out;
    out.n = n;
    out.d = d;
    out.centered = false;
    out.kmax = kmax;
    out.trials = trials;
    out.master_seed = master_seed;
    for (int k = 1; k <= kmax; ++k) {
        const MeanVar mv = mean_var(samples[static_cast<size_t>(k - 1)]);
        out.rows.push_back({k, mv.mean, mv.mean_std_error, mv.variance, mv.variance_std_error,
                            poisson_cycle_mean(d, k), poisson_cycle_variance(d, k)});
    }
    out.wall_clock_seconds = seconds_since(t0);
    return out;
}

TraceCampaignResult semisparse_trace_campaign(const DnRule& rule, long n, int kmax, long trials,
                                              std::uint64_t master_seed) {
    if (kmax < 1 || kmax > 6) throw ValidationError("trace depth must lie in [1, 6]");
    if (trials < 2) throw ValidationError("variance estimates need at least 2 trials");
    const long dn = rule.evaluate(n);
    if (static_cast<double>(dn) * static_cast<double>(dn) > static_cast<double>(n) / 10.0)
        throw ValidationError("d_n^2 > n/10: dimension too small for the growing-degree statistic");
    const double cost = static_cast<double>(trials) * static_cast<double>(n) * static_cast<double>(n);
    if (cost > 5e10) throw ResourceError("trace campaign budget exceeded");

    const auto t0 = std::chrono::steady_clock::now();
    const double root_dn = std::sqrt(static_cast<double>(dn));
    std::vector<std::vector<double>> samples(static_cast<size_t>(kmax));
    for (long trial = 0; trial < trials; ++trial) {
        Rng rng(derive_stream_seed(master_seed, static_cast<std::uint64_t>(trial)));
        ModelMatrix a = sample_sparse_bernoulli(static_cast<double>(dn), n, rng);
        const auto traces = trace_powers(a, kmax, n);
        for (int k = 1; k <= kmax; ++k) {
            const double scale = std::pow(root_dn, k);
            samples[static_cast<size_t>(k - 1)].push_back(
                traces[static_cast<size_t>(k - 1)].real() / scale - scale);
        }
    }

    TraceCampaignResult out;
    out.n = n;
    out.d = static_cast<double>(dn);
    out.centered = true;
    out.kmax = kmax;
    out.trials = trials;
    out.master_seed = master_seed;
    for (int k = 1; k <= kmax; ++k) {
        const MeanVar mv = mean_var(samples[static_cast<size_t>(k - 1)]);
        out.rows.push_back({k, mv.mean, mv.mean_std_error, mv.variance, mv.variance_std_error,
                            (k % 2 == 0) ? 1.0 : 0.0, static_cast<double>(k)});
    }
    out.wall_clock_seconds = seconds_since(t0);
    return out;
}

MonotonicityDiagnostic monotonicity_diagnostic(const EntryLaw& law, double theta,
                                               const std::vector<long>& sizes,
                                               long trials_per_size, int repetitions,
                                               std::uint64_t master_seed) {
    if (sizes.size() < 2) throw ValidationError("diagnostic needs at least two sizes");
    if (trials_per_size < 1) throw ValidationError("trials per size must be >= 1");
    if (repetitions < 1) throw ValidationError("repetitions must be >= 1");

    MonotonicityDiagnostic diag;
    diag.sizes = sizes;
    diag.pooled_mean_distance.assign(sizes.size(), 0.0);

    for (int rep = 0; rep < repetitions; ++rep) {
        for (size_t si = 0; si < sizes.size(); ++si) {
            ExperimentConfig cfg;
            cfg.regime = Regime::Theorem1;
            cfg.law = law;
            cfg.n = sizes[si];
            cfg.perturbation = PerturbationSpec::diagonal_spikes({theta});
            cfg.trials = trials_per_size;
            cfg.master_seed = derive_stream_seed(
                master_seed, static_cast<std::uint64_t>(rep) * sizes.size() + si);
            cfg.outlier_rule = OutlierRule::fixed_radius(1.15);
            cfg.match_tolerance = 0.6;
            cfg.threads = 1;
            const CampaignResult result = run_campaign(cfg);
            const bool any_match = !result.report.predictions.empty() &&
                                   result.report.predictions.front().matched_trials > 0;
            const double contribution =
                any_match ? result.report.matched_distance_mean : cfg.match_tolerance;
            diag.pooled_mean_distance[si] += contribution / repetitions;
        }
    }

    for (size_t i = 0; i < sizes.size(); ++i) {
        for (size_t j = i + 1; j < sizes.size(); ++j) {
            ++diag.comparisons_total;
            if (diag.pooled_mean_distance[j] <= diag.pooled_mean_distance[i] + 1e-12)
                ++diag.comparisons_non_increasing;
        }
    }
    diag.passed = 3 * diag.comparisons_non_increasing >= 2 * diag.comparisons_total;
    return diag;
}

}  // namespace speclab
