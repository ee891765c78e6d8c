#pragma once

#include <string>

#include "speclab/cycle_oracle.hpp"
#include "speclab/entry_law.hpp"
#include "speclab/harness.hpp"
#include "speclab/limit_objects.hpp"
#include "speclab/perturbation.hpp"
#include "speclab/series.hpp"

namespace speclab {

// JSON text for every externally visible object. Complex numbers are
// [re, im] pairs; documents carry a "schema" version tag; malformed input
// surfaces as ValidationError. Emission order is fixed, so equal inputs
// produce byte-identical text.

std::string law_to_json(const EntryLaw& law);
EntryLaw law_from_json(const std::string& text);

std::string perturbation_to_json(const PerturbationSpec& spec);
PerturbationSpec perturbation_from_json(const std::string& text);

std::string series_to_json(const TruncatedPowerSeries& series);
TruncatedPowerSeries series_from_json(const std::string& text);

std::string limit_sample_to_json(const LimitSample& sample);

std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);

// include_timing=false drops wall-clock fields for byte-identical reruns.
std::string campaign_report_to_json(const CampaignResult& result, bool include_timing = true,
                                    bool include_records = true);
std::string trace_campaign_to_json(const TraceCampaignResult& result, bool include_timing = true);
std::string moment_campaign_to_json(const MomentCampaignResult& result);

}  // namespace speclab
