#pragma once

#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"

namespace secbeam {

// Received SINR of user k when its true channel is h.
double user_sinr(const BeamformingSolution& sol, const CxVector& h,
                 double noise_var, int k);

// SINR of the eavesdropper intercepting stream k when its true channel is h.
double eve_sinr(const BeamformingSolution& sol, const CxVector& h,
                double noise_var, int k);

struct SecrecyRate {
  double clamped;  // [log2(1+s) - log2(1+se)]^+
  double raw;      // may be negative
};

SecrecyRate secrecy_rate(double user_sinr_value, double eve_sinr_value);

struct TrialMetrics {
  double total_power = 0.0;
  std::vector<double> user_sinrs;
  std::vector<double> eve_sinrs_per_target;  // per intercepted stream, linear
  std::vector<double> secret_rates;          // clamped, per user
  std::vector<double> secret_rates_raw;      // kept for diagnostics
  double secret_sum_rate = 0.0;              // sum of the clamped rates
  double secret_sum_rate_raw = 0.0;
  double mean_eve_sinr = 0.0;     // linear mean across streams
  double eve_sinr_db_avg = 0.0;   // dB of the linear mean
};

// Evaluates one channel draw; channels.true_channels must be populated.
TrialMetrics evaluate_trial(const ChannelSet& channels,
                            const BeamformingSolution& sol);

}  // namespace secbeam
