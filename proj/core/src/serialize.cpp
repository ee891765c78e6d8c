#include "speclab/serialize.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

using Json = nlohmann::ordered_json;
using Complex = std::complex<double>;

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(std::string(what) + " must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_list_json(const std::vector<Complex>& zs) {
    Json arr = Json::array();
    for (const auto& z : zs) arr.push_back(complex_json(z));
    return arr;
}

std::vector<Complex> complex_list_from(const Json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(complex_from(item, what));
    return out;
}

Json parse(const std::string& text, const char* what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError(std::string("malformed JSON for ") + what);
    return j;
}

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ValidationError(std::string("missing field \"") + name + "\"");
    return *it;
}

double number_field(const Json& j, const char* name) {
    const Json& f = field(j, name);
    if (!f.is_number()) throw ValidationError(std::string("field \"") + name + "\" must be a number");
    return f.get<double>();
}

long integer_field(const Json& j, const char* name) {
    const Json& f = field(j, name);
    if (!f.is_number_integer() && !f.is_number_unsigned())
        throw ValidationError(std::string("field \"") + name + "\" must be an integer");
    return f.get<long>();
}

std::string string_field(const Json& j, const char* name) {
    const Json& f = field(j, name);
    if (!f.is_string()) throw ValidationError(std::string("field \"") + name + "\" must be a string");
    return f.get<std::string>();
}

Json law_json(const EntryLaw& law) {
    Json j;
    switch (law.kind()) {
        case LawKind::SymmetrizedPareto:
            j["kind"] = "pareto";
            j["alpha"] = law.pareto_alpha();
            break;
        case LawKind::Rademacher:
            j["kind"] = "rademacher";
            break;
        case LawKind::StandardRealGaussian:
            j["kind"] = "gaussian";
            break;
        case LawKind::ComplexGaussian:
            j["kind"] = "complex-gaussian";
            j["rho"] = complex_json(law.gaussian_correlation());
            break;
        case LawKind::BernoulliSparse:
            j["kind"] = "bernoulli";
            j["d"] = law.sparse_mean_degree();
            j["n"] = law.sparse_dimension();
            j["centered"] = law.sparse_centered();
            break;
        case LawKind::Truncated:
            j["kind"] = "truncated";
            j["base"] = law_json(law.truncation_base());
            j["level"] = law.truncation_level();
            break;
    }
    return j;
}

EntryLaw law_from(const Json& j) {
    const std::string kind = string_field(j, "kind");
    if (kind == "pareto") return EntryLaw::symmetrized_pareto(number_field(j, "alpha"));
    if (kind == "rademacher") return EntryLaw::rademacher();
    if (kind == "gaussian") return EntryLaw::standard_real_gaussian();
    if (kind == "complex-gaussian")
        return EntryLaw::complex_gaussian(complex_from(field(j, "rho"), "rho"));
    if (kind == "bernoulli") {
        bool centered = false;
        if (auto it = j.find("centered"); it != j.end()) {
            if (!it->is_boolean()) throw ValidationError("field \"centered\" must be a boolean");
            centered = it->get<bool>();
        }
        return EntryLaw::bernoulli_sparse(number_field(j, "d"), integer_field(j, "n"), centered);
    }
    if (kind == "truncated")
        return EntryLaw::truncated(law_from(field(j, "base")), number_field(j, "level"));
    throw ValidationError("unknown law kind: " + kind);
}

Json perturbation_json(const PerturbationSpec& spec) {
    Json j;
    switch (spec.cls()) {
        case PerturbationSpec::Class::SparseEntries: {
            j["class"] = "sparse_entries";
            Json arr = Json::array();
            for (const auto& e : spec.entries()) {
                Json item;
                item["row"] = e.row;
                item["col"] = e.col;
                item["value"] = complex_json(e.value);
                arr.push_back(std::move(item));
            }
            j["entries"] = std::move(arr);
            break;
        }
        case PerturbationSpec::Class::DiagonalSpikes:
            j["class"] = "diagonal_spikes";
            j["thetas"] = complex_list_json(spec.thetas());
            break;
        case PerturbationSpec::Class::JordanBlock:
            j["class"] = "jordan_block";
            j["theta"] = complex_json(spec.jordan_theta());
            j["size"] = spec.jordan_size();
            j["offset"] = spec.jordan_offset();
            break;
        case PerturbationSpec::Class::FullMean:
            j["class"] = "full_mean";
            j["mu"] = complex_json(spec.mean_mu());
            break;
        case PerturbationSpec::Class::FactoredLowRank: {
            j["class"] = "factored_low_rank";
            Json u = Json::array(), v = Json::array();
            for (const auto& col : spec.u_columns()) u.push_back(complex_list_json(col));
            for (const auto& col : spec.v_columns()) v.push_back(complex_list_json(col));
            j["u"] = std::move(u);
            j["v"] = std::move(v);
            break;
        }
    }
    return j;
}

PerturbationSpec perturbation_from(const Json& j) {
    const std::string cls = string_field(j, "class");
    if (cls == "sparse_entries") {
        const Json& arr = field(j, "entries");
        if (!arr.is_array()) throw ValidationError("field \"entries\" must be an array");
        std::vector<PerturbationEntry> entries;
        for (const auto& item : arr) {
            PerturbationEntry e;
            e.row = integer_field(item, "row");
            e.col = integer_field(item, "col");
            e.value = complex_from(field(item, "value"), "value");
            entries.push_back(e);
        }
        return PerturbationSpec::sparse_entries(std::move(entries));
    }
    if (cls == "diagonal_spikes")
        return PerturbationSpec::diagonal_spikes(complex_list_from(field(j, "thetas"), "thetas"));
    if (cls == "jordan_block") {
        long offset = 0;
        if (j.contains("offset")) offset = integer_field(j, "offset");
        return PerturbationSpec::jordan_block(complex_from(field(j, "theta"), "theta"),
                                              integer_field(j, "size"), offset);
    }
    if (cls == "full_mean") return PerturbationSpec::full_mean(complex_from(field(j, "mu"), "mu"));
    if (cls == "factored_low_rank") {
        const Json& u = field(j, "u");
        const Json& v = field(j, "v");
        if (!u.is_array() || !v.is_array())
            throw ValidationError("fields \"u\" and \"v\" must be arrays of columns");
        std::vector<std::vector<Complex>> ucols, vcols;
        for (const auto& col : u) ucols.push_back(complex_list_from(col, "u column"));
        for (const auto& col : v) vcols.push_back(complex_list_from(col, "v column"));
        return PerturbationSpec::factored_low_rank(std::move(ucols), std::move(vcols));
    }
    throw ValidationError("unknown perturbation class: " + cls);
}

Json series_json(const TruncatedPowerSeries& series) {
    Json j;
    j["coefficients"] = complex_list_json(series.coefficients);
    if (std::isfinite(series.validity_radius))
        j["validity_radius"] = series.validity_radius;
    else
        j["validity_radius"] = nullptr;
    j["sampled"] = series.sampled;
    return j;
}

TruncatedPowerSeries series_from(const Json& j) {
    TruncatedPowerSeries out;
    out.coefficients = complex_list_from(field(j, "coefficients"), "coefficients");
    if (out.coefficients.empty()) throw ValidationError("series needs at least one coefficient");
    const Json& radius = field(j, "validity_radius");
    if (radius.is_null()) {
        out.validity_radius = std::numeric_limits<double>::infinity();
    } else if (radius.is_number()) {
        out.validity_radius = radius.get<double>();
        if (!(out.validity_radius > 0)) throw ValidationError("validity radius must be positive");
    } else {
        throw ValidationError("field \"validity_radius\" must be a number or null");
    }
    if (j.contains("sampled")) {
        const Json& s = j.at("sampled");
        if (!s.is_boolean()) throw ValidationError("field \"sampled\" must be a boolean");
        out.sampled = s.get<bool>();
    }
    return out;
}

const char* regime_json_name(LimitRegime regime) {
    switch (regime) {
        case LimitRegime::IidHeavyTail: return "iid";
        case LimitRegime::SparseFixedD: return "sparse";
        case LimitRegime::SemiSparse: return "semisparse";
    }
    throw ValidationError("unknown limit regime");
}

Json outlier_rule_json(const OutlierRule& rule) {
    Json j;
    if (rule.kind == OutlierRule::Kind::FixedRadius) {
        j["kind"] = "fixed-radius";
        j["radius"] = rule.radius;
    } else {
        j["kind"] = "largest-gap";
        j["min_gap_ratio"] = rule.min_gap_ratio;
        j["bulk_level"] = rule.bulk_level;
    }
    return j;
}

OutlierRule outlier_rule_from(const Json& j) {
    const std::string kind = string_field(j, "kind");
    if (kind == "fixed-radius") return OutlierRule::fixed_radius(number_field(j, "radius"));
    if (kind == "largest-gap")
        return OutlierRule::largest_gap(number_field(j, "min_gap_ratio"),
                                        number_field(j, "bulk_level"));
    throw ValidationError("unknown outlier rule kind: " + kind);
}

Json config_json(const ExperimentConfig& config) {
    Json j;
    j["schema"] = "speclab-config-v1";
    j["regime"] = regime_name(config.regime);
    j["law"] = law_json(config.law);
    j["n"] = config.n;
    j["d"] = config.d;
    j["dn_exponent"] = config.dn_rule.exponent;
    j["perturbation"] = perturbation_json(config.perturbation);
    j["trials"] = config.trials;
    j["master_seed"] = config.master_seed;
    j["outlier_rule"] = outlier_rule_json(config.outlier_rule);
    j["match_tolerance"] = config.match_tolerance;
    j["K"] = config.K;
    j["spurious_allowance"] = config.spurious_allowance;
    j["record_traces"] = config.record_traces;
    j["threads"] = config.threads;
    j["dense_ceiling"] = config.dense_ceiling;
    return j;
}

Json matching_json(const Matching& matching) {
    Json j;
    Json pairs = Json::array();
    for (const auto& pair : matching.pairs) {
        Json item;
        item["predicted"] = complex_json(pair.predicted);
        item["observed"] = complex_json(pair.observed);
        item["distance"] = pair.distance;
        pairs.push_back(std::move(item));
    }
    j["pairs"] = std::move(pairs);
    j["unmatched_predicted"] = complex_list_json(matching.unmatched_predicted);
    j["unmatched_observed"] = complex_list_json(matching.unmatched_observed);
    j["total_distance"] = matching.total_distance;
    return j;
}

Json record_json(const TrialRecord& rec) {
    Json j;
    j["trial_index"] = rec.trial_index;
    j["derived_seed"] = rec.derived_seed;
    j["solver_failed"] = rec.solver_failed;
    if (rec.solver_failed) j["failure_reason"] = rec.failure_reason;
    j["observed_outliers"] = complex_list_json(rec.observed_outliers);
    j["predicted"] = complex_list_json(rec.predicted);
    j["matching"] = matching_json(rec.matching);
    j["bulk_radius"] = rec.bulk_radius;
    j["largest_modulus"] = rec.largest_modulus;
    j["escape_observed"] = rec.escape_observed;
    j["spurious_count"] = rec.spurious_count;
    j["success"] = rec.success;
    if (!rec.trace_powers.empty()) j["trace_powers"] = complex_list_json(rec.trace_powers);
    return j;
}

Json report_json(const AggregateReport& rep, bool include_timing) {
    Json j;
    j["trials"] = rep.trials;
    j["failed_trials"] = rep.failed_trials;
    j["success_fraction"] = rep.success_fraction;
    j["all_matched_fraction"] = rep.all_matched_fraction;
    Json preds = Json::array();
    for (const auto& stat : rep.predictions) {
        Json item;
        item["predicted"] = complex_json(stat.predicted);
        item["matched_trials"] = stat.matched_trials;
        item["mean_distance"] = stat.mean_distance;
        item["max_distance"] = stat.max_distance;
        preds.push_back(std::move(item));
    }
    j["predictions"] = std::move(preds);
    j["matched_distance"] = Json{{"mean", rep.matched_distance_mean},
                                 {"max", rep.matched_distance_max}};
    j["bulk_radius"] = Json{{"mean", rep.bulk_radius_mean}, {"max", rep.bulk_radius_max}};
    j["spurious"] = Json{{"rate", rep.spurious_rate}, {"mean_count", rep.mean_spurious_count}};
    j["escape_count"] = rep.escape_count;
    Json rows = Json::array();
    for (const auto& row : rep.trace_moments) {
        Json item;
        item["k"] = row.k;
        item["mean"] = complex_json(row.mean);
        item["mean_std_error"] = row.mean_std_error;
        item["variance"] = row.variance;
        item["variance_std_error"] = row.variance_std_error;
        if (row.has_targets) {
            item["target_mean"] = row.target_mean;
            item["target_variance"] = row.target_variance;
        }
        rows.push_back(std::move(item));
    }
    j["trace_moments"] = std::move(rows);
    if (include_timing) j["wall_clock_seconds"] = rep.wall_clock_seconds;
    return j;
}

Json moment_stat_json(const MomentStat& stat, bool real_only) {
    if (real_only) return Json(stat.value.real());
    return complex_json(stat.value);
}

}  // namespace

std::string law_to_json(const EntryLaw& law) { return law_json(law).dump(2); }

EntryLaw law_from_json(const std::string& text) { return law_from(parse(text, "entry law")); }

std::string perturbation_to_json(const PerturbationSpec& spec) {
    return perturbation_json(spec).dump(2);
}

PerturbationSpec perturbation_from_json(const std::string& text) {
    return perturbation_from(parse(text, "perturbation"));
}

std::string series_to_json(const TruncatedPowerSeries& series) {
    return series_json(series).dump(2);
}

TruncatedPowerSeries series_from_json(const std::string& text) {
    return series_from(parse(text, "series"));
}

std::string limit_sample_to_json(const LimitSample& sample) {
    Json j;
    j["schema"] = "speclab-limit-sample-v1";
    j["regime"] = regime_json_name(sample.regime);
    j["rho"] = complex_json(sample.rho);
    j["d"] = sample.d;
    j["series"] = series_json(sample.series);
    j["gaussians"] = complex_list_json(sample.gaussians);
    Json counts = Json::array();
    for (long y : sample.poisson_counts) counts.push_back(y);
    j["poisson_counts"] = std::move(counts);
    return j.dump(2);
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
    return config_json(config).dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    const Json j = parse(text, "experiment config");
    if (j.contains("schema") && j.at("schema") != "speclab-config-v1")
        throw ValidationError("unsupported config schema");
    ExperimentConfig config;
    config.regime = regime_from_name(string_field(j, "regime"));
    if (j.contains("law")) config.law = law_from(j.at("law"));
    config.n = integer_field(j, "n");
    if (j.contains("d")) config.d = number_field(j, "d");
    if (j.contains("dn_exponent")) config.dn_rule.exponent = number_field(j, "dn_exponent");
    if (j.contains("perturbation")) config.perturbation = perturbation_from(j.at("perturbation"));
    if (j.contains("trials")) config.trials = integer_field(j, "trials");
    if (j.contains("master_seed")) {
        const Json& seed = j.at("master_seed");
        if (!seed.is_number_integer() && !seed.is_number_unsigned())
            throw ValidationError("field \"master_seed\" must be an integer");
        config.master_seed = seed.get<std::uint64_t>();
    }
    if (j.contains("outlier_rule")) config.outlier_rule = outlier_rule_from(j.at("outlier_rule"));
    if (j.contains("match_tolerance")) config.match_tolerance = number_field(j, "match_tolerance");
    if (j.contains("K")) config.K = static_cast<int>(integer_field(j, "K"));
    if (j.contains("spurious_allowance"))
        config.spurious_allowance = integer_field(j, "spurious_allowance");
    if (j.contains("record_traces")) {
        const Json& f = j.at("record_traces");
        if (!f.is_boolean()) throw ValidationError("field \"record_traces\" must be a boolean");
        config.record_traces = f.get<bool>();
    }
    if (j.contains("threads")) config.threads = static_cast<int>(integer_field(j, "threads"));
    if (j.contains("dense_ceiling")) config.dense_ceiling = integer_field(j, "dense_ceiling");
    config.validate();
    return config;
}

std::string campaign_report_to_json(const CampaignResult& result, bool include_timing,
                                    bool include_records) {
    Json j;
    j["schema"] = "speclab-report-v1";
    j["config"] = config_json(result.config);
    j["report"] = report_json(result.report, include_timing);
    if (include_records) {
        Json records = Json::array();
        for (const auto& rec : result.records) records.push_back(record_json(rec));
        j["records"] = std::move(records);
    }
    return j.dump(2);
}

std::string trace_campaign_to_json(const TraceCampaignResult& result, bool include_timing) {
    Json j;
    j["schema"] = "speclab-traces-v1";
    j["n"] = result.n;
    j["d"] = result.d;
    j["centered"] = result.centered;
    j["kmax"] = result.kmax;
    j["trials"] = result.trials;
    j["master_seed"] = result.master_seed;
    Json rows = Json::array();
    for (const auto& row : result.rows) {
        Json item;
        item["k"] = row.k;
        item["mean"] = row.mean;
        item["mean_std_error"] = row.mean_std_error;
        item["variance"] = row.variance;
        item["variance_std_error"] = row.variance_std_error;
        item["target_mean"] = row.target_mean;
        item["target_variance"] = row.target_variance;
        rows.push_back(std::move(item));
    }
    j["rows"] = std::move(rows);
    if (include_timing) j["wall_clock_seconds"] = result.wall_clock_seconds;
    return j.dump(2);
}

std::string moment_campaign_to_json(const MomentCampaignResult& result) {
    Json j;
    j["schema"] = "speclab-moments-v1";
    j["n"] = result.n;
    j["k"] = result.k;
    j["trials"] = result.trials;
    Json moments;
    moments["t_mean"] = moment_stat_json(result.t.mean, false);
    moments["t_abs_square"] = moment_stat_json(result.t.abs_square, true);
    moments["t_square"] = moment_stat_json(result.t.square, false);
    moments["r_mean"] = moment_stat_json(result.r.mean, false);
    moments["r_abs_square"] = moment_stat_json(result.r.abs_square, true);
    moments["r_square"] = moment_stat_json(result.r.square, false);
    j["moments"] = std::move(moments);
    Json stderrs;
    stderrs["t_mean"] = result.t.mean.std_error;
    stderrs["t_abs_square"] = result.t.abs_square.std_error;
    stderrs["t_square"] = result.t.square.std_error;
    stderrs["r_mean"] = result.r.mean.std_error;
    stderrs["r_abs_square"] = result.r.abs_square.std_error;
    stderrs["r_square"] = result.r.square.std_error;
    j["stderr"] = std::move(stderrs);
    return j.dump(2);
}

}  // namespace speclab
