#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/verifier.hpp"

namespace secbeam {

// Monte Carlo aggregate of one method at one scenario point.  Standard errors
// are of the mean; the eavesdropper column is dB of the mean linear SINR by
// default (see ScenarioConfig::eve_sinr_mean_of_db).
struct MethodAggregate {
  Method method = Method::kRobust;
  double mean_total_power = 0.0;
  double se_total_power = 0.0;
  double mean_secret_sum_rate = 0.0;
  double se_secret_sum_rate = 0.0;
  double mean_eve_sinr_db = 0.0;
  double se_eve_sinr_db = 0.0;
  double frac_worstcase_feasible = 0.0;
  int n_trials = 0;
  std::uint64_t seed = 0;
};

struct ScenarioResult {
  std::vector<MethodAggregate> methods;  // config.methods order
};

enum class SweepParameter { kG, kN, kK };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kG;
  std::vector<double> values;  // strictly increasing; integral for kN and kK
  ScenarioConfig fixed;
};

struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string code_version;
};

struct SweepRow {
  double value = 0.0;
  std::vector<MethodAggregate> methods;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::kG;
  std::vector<SweepRow> rows;
  Provenance provenance;
};

// Throw std::invalid_argument naming the offending field.
void validate(const ScenarioConfig& config);
void validate(const SweepSpec& spec);

// Copy of base with one swept field replaced.  kN and kK require integral
// values.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 SweepParameter parameter, double value);

// Runs config.n_trials Monte Carlo trials over the worker pool and aggregates
// per method.  Synthetic mode fixes the channel set from base_seed and draws
// fresh errors per trial; physical mode re-synthesizes channels per trial.
// Trial t always derives its stream from mix_seed(base_seed, t), so results
// are independent of the worker count.
ScenarioResult run_scenario(const ScenarioConfig& config);

SweepResult run_sweep(const SweepSpec& spec);

// Worker pool width: the SECBEAM_WORKERS environment variable when set to a
// positive integer, hardware concurrency otherwise.
int worker_count();

// Built-in experiment presets.  Names fig2..fig8 select the bundled sweep
// family (eavesdropper SINR vs g, secrecy rate vs g/N/K, power vs g/N/K) at
// desk scale; full scale raises the array, user count and trial count.
struct ReproPreset {
  std::string name;
  std::string description;
  SweepSpec spec;
};

std::vector<std::string> repro_preset_names();
ReproPreset repro_preset(const std::string& name, bool full_scale = false);

// Runs a preset and applies its trend self-checks plus a structure gate
// (rank-one blocks, first-order residuals below 1e-9 on the first scenario's
// robust solution).  Throws std::runtime_error naming the first violated
// check.  trials_override > 0 replaces the preset trial count.
struct ReproOutcome {
  ReproPreset preset;
  SweepResult result;
  std::vector<std::string> checks;  // one line per satisfied self-check
};

ReproOutcome run_repro(const std::string& name, bool full_scale = false,
                       int trials_override = 0);

}  // namespace secbeam
