#pragma once

#include <optional>
#include <vector>

#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/types.hpp"

namespace secbeam {

// Per-user SINR floor and per-target eavesdropper SINR cap, linear scale.
struct TargetSinrs {
  RealVector gamma;    // K
  RealVector gamma_e;  // K
};

TargetSinrs uniform_targets(int n_users, double gamma_db, double gamma_e_db);
void validate(const TargetSinrs& targets);

// Rank-one transmit design: unit beam directions with per-user powers plus an
// optional artificial-noise beam.  Multipliers certify the robust constraints
// and are absent for users with a zero error radius or for baselines that do
// not produce them.
struct BeamformingSolution {
  Method method = Method::kRobust;
  CxMatrix directions;    // N x K, unit columns
  RealVector powers;      // K
  CxVector an_direction;  // N, unit
  double an_power = 0.0;
  std::vector<std::optional<double>> user_multipliers;  // K
  std::vector<std::optional<double>> eve_multipliers;   // K

  double total_power() const {
    double t = an_power;
    for (Eigen::Index i = 0; i < powers.size(); ++i) t += powers[i];
    return t;
  }
};

// Closed-form worst-case design: beams along the channel estimates, powers
// gamma_k sigma_k^2 / (norm_k - eps_k)^2, no artificial noise.
BeamformingSolution solve_robust(const ChannelSet& channels,
                                 const TargetSinrs& targets);

// Baseline that trusts the estimates: powers gamma_k sigma_k^2 / norm_k^2.
BeamformingSolution solve_non_robust(const ChannelSet& channels,
                                     const TargetSinrs& targets);

// Baseline that diverts a fraction of the robust power budget into an
// artificial-noise beam at the eavesdropper; total power is unchanged.
BeamformingSolution solve_an_split(const ChannelSet& channels,
                                   const TargetSinrs& targets,
                                   double an_fraction);

struct CovarianceViews {
  std::vector<CxMatrix> signal;  // S_k = p_k d_k d_k^H
  CxMatrix an;                   // W = p_an a a^H
};

CovarianceViews covariance_views(const BeamformingSolution& solution);

}  // namespace secbeam
