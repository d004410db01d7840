#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/harness.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/verifier.hpp"

namespace secbeam {

// JSON interchange.  Complex entries are [re, im] pairs; matrices are lists
// of columns.  Parsers start from defaulted structs, apply the fields that
// are present, and throw std::invalid_argument naming any unknown or
// ill-typed field.  indent < 0 emits the compact single-line form.

std::string to_json(const ScenarioConfig& config, int indent = 2);
ScenarioConfig scenario_config_from_json(const std::string& text);

std::string to_json(const SweepSpec& spec, int indent = 2);
SweepSpec sweep_spec_from_json(const std::string& text);

std::string to_json(const ChannelSet& channels, int indent = 2);
ChannelSet channel_set_from_json(const std::string& text);

std::string to_json(const BeamformingSolution& solution, int indent = 2);
BeamformingSolution solution_from_json(const std::string& text);

std::string to_json(const FeasibilityReport& report, int indent = 2);

std::string to_json(const SweepResult& result, int indent = 2);

// Fixed-schema CSV (header mandatory, LF endings, full-precision floats):
//   sweep_value,method,mean_total_power,se_total_power,mean_secret_sum_rate,
//   se_secret_sum_rate,mean_eve_sinr_db,se_eve_sinr_db,
//   frac_worstcase_feasible,n_trials,seed
std::string sweep_csv(const SweepResult& result);

// One row per trial:
//   trial,total_power,secret_sum_rate,secret_sum_rate_raw,mean_eve_sinr,
//   eve_sinr_db_avg
std::string trial_csv(const std::vector<TrialMetrics>& trials);

std::string method_name(Method method);
Method method_from_name(const std::string& name);

std::string sweep_parameter_name(SweepParameter parameter);
SweepParameter sweep_parameter_from_name(const std::string& name);

// FNV-1a over the compact canonical dump; keys are emitted sorted, so the
// hash is stable across field orderings in the source document.
std::uint64_t config_hash(const ScenarioConfig& config);
std::uint64_t sweep_hash(const SweepSpec& spec);

std::string code_version();

}  // namespace secbeam
