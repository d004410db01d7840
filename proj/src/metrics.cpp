#include "secbeam/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace secbeam {

namespace {

double beam_gain(const BeamformingSolution& sol, const CxVector& h, int i) {
  return std::norm(sol.directions.col(i).dot(h));
}

double interference(const BeamformingSolution& sol, const CxVector& h,
                    int skip) {
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(sol.powers.size()); ++i) {
    if (i == skip) continue;
    acc += sol.powers[i] * beam_gain(sol, h, i);
  }
  if (sol.an_power > 0.0) {
    acc += sol.an_power * std::norm(sol.an_direction.dot(h));
  }
  return acc;
}

}  // namespace

double user_sinr(const BeamformingSolution& sol, const CxVector& h,
                 double noise_var, int k) {
  const double signal = sol.powers[k] * beam_gain(sol, h, k);
  return signal / (interference(sol, h, k) + noise_var);
}

double eve_sinr(const BeamformingSolution& sol, const CxVector& h,
                double noise_var, int k) {
  const double tapped = sol.powers[k] * beam_gain(sol, h, k);
  return tapped / (interference(sol, h, k) + noise_var);
}

SecrecyRate secrecy_rate(double user_sinr_value, double eve_sinr_value) {
  const double raw =
      std::log2(1.0 + user_sinr_value) - std::log2(1.0 + eve_sinr_value);
  return {raw > 0.0 ? raw : 0.0, raw};
}

TrialMetrics evaluate_trial(const ChannelSet& channels,
                            const BeamformingSolution& sol) {
  const int k = channels.n_users();
  if (channels.true_channels.cols() != k || channels.eve_true.size() == 0) {
    throw std::invalid_argument("evaluate_trial: true channels not populated");
  }
  TrialMetrics out;
  out.total_power = sol.total_power();
  out.user_sinrs.resize(k);
  out.eve_sinrs_per_target.resize(k);
  out.secret_rates.resize(k);
  out.secret_rates_raw.resize(k);
  double eve_acc = 0.0;
  for (int i = 0; i < k; ++i) {
    out.user_sinrs[i] = user_sinr(sol, channels.true_channels.col(i),
                                  channels.noise_vars[i], i);
    out.eve_sinrs_per_target[i] =
        eve_sinr(sol, channels.eve_true, channels.eve_noise_var, i);
    eve_acc += out.eve_sinrs_per_target[i];
    const SecrecyRate r =
        secrecy_rate(out.user_sinrs[i], out.eve_sinrs_per_target[i]);
    out.secret_rates[i] = r.clamped;
    out.secret_rates_raw[i] = r.raw;
    out.secret_sum_rate += r.clamped;
    out.secret_sum_rate_raw += r.raw;
  }
  out.mean_eve_sinr = eve_acc / k;
  out.eve_sinr_db_avg = 10.0 * std::log10(out.mean_eve_sinr);
  return out;
}

}  // namespace secbeam
