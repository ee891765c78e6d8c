#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "speclab/errors.hpp"
#include "speclab/harness.hpp"
#include "speclab/limit_objects.hpp"
#include "speclab/rng.hpp"
#include "speclab/serialize.hpp"

using namespace speclab;
using cd = std::complex<double>;

namespace {

ExperimentConfig tiny_theorem1(long n, long trials) {
    ExperimentConfig cfg;
    cfg.regime = Regime::Theorem1;
    cfg.law = EntryLaw::standard_real_gaussian();
    cfg.n = n;
    cfg.trials = trials;
    cfg.master_seed = 2024;
    cfg.perturbation = PerturbationSpec::diagonal_spikes({cd(3, 0)});
    cfg.outlier_rule = OutlierRule::fixed_radius(1.6);
    cfg.match_tolerance = 0.6;
    cfg.K = 4;
    return cfg;
}

bool same_complex_list(const std::vector<cd>& a, const std::vector<cd>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("matching pairs nearby values and reports the distance") {
    const Matching m = match_outliers({cd(1.98, 0.02)}, {cd(2, 0)}, 0.25);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].distance == doctest::Approx(std::abs(cd(-0.02, 0.02))));
    CHECK(m.unmatched_predicted.empty());
    CHECK(m.unmatched_observed.empty());
    CHECK(m.total_distance == doctest::Approx(m.pairs[0].distance));
}

TEST_CASE("matching reports missing observations as unmatched predictions") {
    const Matching m = match_outliers({}, {cd(2, 0)}, 0.25);
    CHECK(m.pairs.empty());
    REQUIRE(m.unmatched_predicted.size() == 1);
    CHECK(m.unmatched_predicted[0] == cd(2, 0));
}

TEST_CASE("matching minimizes the total distance, not the greedy order") {
    // Greedy would pair 1.05 -> 1.1 and leave 2.0 -> 1.0 at distance 1.0;
    // the optimal assignment swaps them for a total of 0.95.
    const Matching m = match_outliers({cd(1.1, 0), cd(1.0, 0)}, {cd(1.05, 0), cd(2.0, 0)}, 5.0);
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.total_distance == doctest::Approx(0.95));

    const Matching two = match_outliers({cd(2.9, 0), cd(4.1, 0)}, {cd(3, 0), cd(4, 0)}, 0.25);
    REQUIRE(two.pairs.size() == 2);
    CHECK(two.total_distance == doctest::Approx(0.2));
}

TEST_CASE("matching drops pairs beyond the tolerance after assignment") {
    const Matching m = match_outliers({cd(2.05, 0), cd(9, 0)}, {cd(2, 0), cd(4, 0)}, 0.25);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].predicted == cd(2, 0));
    REQUIRE(m.unmatched_predicted.size() == 1);
    CHECK(m.unmatched_predicted[0] == cd(4, 0));
    REQUIRE(m.unmatched_observed.size() == 1);
    CHECK(m.unmatched_observed[0] == cd(9, 0));
}

TEST_CASE("matching agrees with the exhaustive assignment oracle") {
    Rng rng = make_rng(404);
    for (int rep = 0; rep < 200; ++rep) {
        const size_t p = static_cast<size_t>(7.0 * uniform01(rng));  // 0..6
        const size_t o = static_cast<size_t>(7.0 * uniform01(rng));
        std::vector<cd> predicted(p), observed(o);
        for (auto& z : predicted) z = cd(6 * uniform01(rng) - 3, 6 * uniform01(rng) - 3);
        for (auto& z : observed) z = cd(6 * uniform01(rng) - 3, 6 * uniform01(rng) - 3);
        const double tol = (rep % 3 == 0) ? 0.5 : (rep % 3 == 1 ? 1.5 : 100.0);

        const Matching got = match_outliers(observed, predicted, tol);
        const oracle::MatchRef ref = oracle::match_reference(observed, predicted, tol);
        CHECK(got.pairs.size() == ref.kept.size());
        CHECK(got.total_distance == doctest::Approx(ref.total).epsilon(1e-9));
        CHECK(got.pairs.size() + got.unmatched_predicted.size() == predicted.size());
        CHECK(got.pairs.size() + got.unmatched_observed.size() == observed.size());
    }
}

TEST_CASE("dn rule rounds the power law and rejects fast growth") {
    DnRule rule;
    CHECK(rule.evaluate(3000) == 14);
    CHECK(rule.evaluate(27) == 3);
    CHECK(rule.evaluate(1000) == 10);
    DnRule fast;
    fast.exponent = 0.6;
    CHECK_THROWS_AS(fast.evaluate(1000), ValidationError);
    CHECK_THROWS_AS(rule.evaluate(2), ValidationError);  // d_n < 2
}

TEST_CASE("config validation rejects inconsistent requests") {
    ExperimentConfig cfg = tiny_theorem1(50, 2);
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig bad = cfg;
    bad.n = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = cfg;
    bad.match_tolerance = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = cfg;
    bad.law = EntryLaw::bernoulli_sparse(3.0, 50, false);  // not standardized
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = cfg;
    bad.regime = Regime::SparseFixedD;
    bad.d = 1.0;  // needs d > 1
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = cfg;
    bad.perturbation = PerturbationSpec::diagonal_spikes(std::vector<cd>(60, cd(1, 0)));
    CHECK_THROWS_AS(bad.validate(), ValidationError);  // support exceeds n
}

TEST_CASE("theoretical bulk radius follows the regime") {
    ExperimentConfig cfg = tiny_theorem1(50, 1);
    CHECK(cfg.theoretical_bulk_radius() == doctest::Approx(1.0));
    cfg.regime = Regime::SparseFixedD;
    cfg.d = 4.0;
    cfg.law = EntryLaw::bernoulli_sparse(4.0, 50, false);
    CHECK(cfg.theoretical_bulk_radius() == doctest::Approx(2.0));
}

TEST_CASE("run_trial is reproducible and stamps the derived seed") {
    const ExperimentConfig cfg = tiny_theorem1(60, 1);
    const TrialRecord a = run_trial(cfg, 0);
    const TrialRecord b = run_trial(cfg, 0);
    CHECK(a.derived_seed == derive_stream_seed(cfg.master_seed, 0));
    CHECK(!a.solver_failed);
    CHECK(same_complex_list(a.observed_outliers, b.observed_outliers));
    CHECK(a.bulk_radius == b.bulk_radius);
    REQUIRE(a.predicted.size() == 1);
    CHECK(std::abs(a.predicted[0] - cd(3, 0)) < 1e-9);
    CHECK(a.success);
    REQUIRE(a.matching.pairs.size() == 1);
    CHECK(a.matching.pairs[0].distance < 0.6);

    const TrialRecord c = run_trial(cfg, 1);
    CHECK(c.derived_seed != a.derived_seed);
}

TEST_CASE("semisparse trials flag the escaping eigenvalue") {
    ExperimentConfig cfg;
    cfg.regime = Regime::SemiSparse;
    cfg.law = EntryLaw::bernoulli_sparse(7.0, 400, false);  // placeholder, replaced per trial
    cfg.n = 400;
    cfg.trials = 1;
    cfg.master_seed = 5;
    cfg.perturbation = PerturbationSpec::sparse_entries({{1, 1, cd(2, 0)}});
    cfg.outlier_rule = OutlierRule::fixed_radius(1.3);
    cfg.match_tolerance = 0.4;
    cfg.K = 4;
    const TrialRecord rec = run_trial(cfg, 0);
    CHECK(!rec.solver_failed);
    CHECK(rec.escape_observed);
    REQUIRE(rec.predicted.size() == 1);
    CHECK(std::abs(rec.predicted[0] - cd(2, 0)) < 1e-9);
    CHECK(rec.matching.unmatched_predicted.empty());
}

TEST_CASE("aggregate folds counts and refuses empty input") {
    CHECK_THROWS_AS(aggregate({}), ValidationError);

    TrialRecord good;
    good.predicted = {cd(2, 0)};
    good.observed_outliers = {cd(2.1, 0)};
    good.matching.pairs = {{cd(2, 0), cd(2.1, 0), 0.1}};
    good.matching.total_distance = 0.1;
    good.bulk_radius = 1.05;
    good.success = true;

    TrialRecord spurious = good;
    spurious.observed_outliers.push_back(cd(5, 0));
    spurious.matching.unmatched_observed = {cd(5, 0)};
    spurious.spurious_count = 1;
    spurious.success = false;
    spurious.bulk_radius = 1.10;

    TrialRecord failed;
    failed.solver_failed = true;
    failed.failure_reason = "synthetic";

    TrialRecord missed = good;
    missed.observed_outliers.clear();
    missed.matching = {};
    missed.matching.unmatched_predicted = {cd(2, 0)};
    missed.success = false;

    const AggregateReport rep = aggregate({good, spurious, failed, missed});
    CHECK(rep.trials == 4);
    CHECK(rep.failed_trials == 1);
    CHECK(rep.success_fraction == doctest::Approx(0.25));
    CHECK(rep.all_matched_fraction == doctest::Approx(0.5));  // good + spurious
    CHECK(rep.spurious_rate == doctest::Approx(0.25));
    CHECK(rep.mean_spurious_count == doctest::Approx(0.25));
    CHECK(rep.bulk_radius_max == doctest::Approx(1.10));
    CHECK(rep.matched_distance_max == doctest::Approx(0.1));
    REQUIRE(rep.predictions.size() == 1);
    CHECK(rep.predictions[0].matched_trials == 2);
}

TEST_CASE("campaign results are reproducible across thread counts") {
    ExperimentConfig cfg = tiny_theorem1(50, 4);
    cfg.threads = 1;
    const CampaignResult one = run_campaign(cfg);
    cfg.threads = 2;
    const CampaignResult two = run_campaign(cfg);
    REQUIRE(one.records.size() == 4);
    REQUIRE(two.records.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(one.records[i].derived_seed == two.records[i].derived_seed);
        CHECK(same_complex_list(one.records[i].observed_outliers,
                                two.records[i].observed_outliers));
    }
    // Everything except the echoed thread-count config knob must be identical.
    const nlohmann::json ja = nlohmann::json::parse(campaign_report_to_json(one, false, true));
    const nlohmann::json jb = nlohmann::json::parse(campaign_report_to_json(two, false, true));
    CHECK(ja.at("report") == jb.at("report"));
    CHECK(ja.at("records") == jb.at("records"));
}

TEST_CASE("sparse trace campaign rows target the divisor sums") {
    const TraceCampaignResult res = sparse_trace_campaign(2.0, 300, 3, 60, 99);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.n == 300);
    CHECK(!res.centered);
    for (int k = 1; k <= 3; ++k) {
        const TraceCampaignRow& row = res.rows[static_cast<size_t>(k) - 1];
        CHECK(row.k == k);
        CHECK(row.target_mean == doctest::Approx(poisson_cycle_mean(2.0, k)));
        CHECK(row.target_variance == doctest::Approx(poisson_cycle_variance(2.0, k)));
        CHECK(std::abs(row.mean - row.target_mean) / row.target_mean < 0.35);
        CHECK(std::abs(row.variance - row.target_variance) / row.target_variance < 0.7);
    }
    const TraceCampaignResult again = sparse_trace_campaign(2.0, 300, 3, 60, 99);
    CHECK(again.rows[2].mean == res.rows[2].mean);
    CHECK(again.rows[2].variance == res.rows[2].variance);
}

TEST_CASE("semisparse trace campaign needs room for the degree growth") {
    DnRule rule;
    CHECK_THROWS_AS(semisparse_trace_campaign(rule, 100, 2, 5, 7), ValidationError);

    const TraceCampaignResult res = semisparse_trace_campaign(rule, 1500, 2, 10, 7);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.centered);
    CHECK(res.d == doctest::Approx(11.0));
    CHECK(res.rows[0].target_mean == doctest::Approx(0.0));
    CHECK(res.rows[1].target_mean == doctest::Approx(1.0));
    CHECK(res.rows[0].target_variance == doctest::Approx(1.0));
    CHECK(res.rows[1].target_variance == doctest::Approx(2.0));
}
