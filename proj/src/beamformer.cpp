#include "secbeam/beamformer.hpp"

#include <cmath>
#include <stdexcept>

#include "secbeam/power_kernels.hpp"

namespace secbeam {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void check_compatible(const ChannelSet& channels, const TargetSinrs& targets) {
  validate(channels);
  validate(targets);
  if (targets.gamma.size() != channels.n_users()) {
    throw std::invalid_argument("targets and channel set disagree on user count");
  }
}

BeamformingSolution directions_only(const ChannelSet& channels) {
  const int n = channels.n_antennas();
  const int k = channels.n_users();
  BeamformingSolution sol;
  sol.directions.resize(n, k);
  for (int i = 0; i < k; ++i) {
    sol.directions.col(i) = channels.estimates.col(i).normalized();
  }
  sol.an_direction = channels.eve_estimate.normalized();
  sol.powers = RealVector::Zero(k);
  sol.user_multipliers.assign(k, std::nullopt);
  sol.eve_multipliers.assign(k, std::nullopt);
  return sol;
}

}  // namespace

TargetSinrs uniform_targets(int n_users, double gamma_db, double gamma_e_db) {
  TargetSinrs t;
  t.gamma = RealVector::Constant(n_users, db_to_linear(gamma_db));
  t.gamma_e = RealVector::Constant(n_users, db_to_linear(gamma_e_db));
  validate(t);
  return t;
}

void validate(const TargetSinrs& targets) {
  if (targets.gamma.size() == 0 ||
      targets.gamma.size() != targets.gamma_e.size()) {
    throw std::invalid_argument("TargetSinrs: inconsistent sizes");
  }
  for (Eigen::Index i = 0; i < targets.gamma.size(); ++i) {
    if (!(targets.gamma[i] > 0) || !(targets.gamma_e[i] > 0)) {
      throw std::invalid_argument("TargetSinrs: targets must be positive");
    }
    if (!(targets.gamma_e[i] < targets.gamma[i])) {
      throw std::invalid_argument(
          "TargetSinrs: eavesdropper cap must sit below the user floor");
    }
  }
}

BeamformingSolution solve_robust(const ChannelSet& channels,
                                 const TargetSinrs& targets) {
  check_compatible(channels, targets);
  BeamformingSolution sol = directions_only(channels);
  sol.method = Method::kRobust;
  const int k = channels.n_users();
  for (int i = 0; i < k; ++i) {
    const double norm = channels.estimates.col(i).norm();
    const double eps = channels.error_radii[i];
    const double gamma = targets.gamma[i];
    const double sigma2 = channels.noise_vars[i];
    if (eps == 0.0) {
      sol.powers[i] = gamma * sigma2 / (norm * norm);
      sol.user_multipliers[i] = std::nullopt;
    } else {
      const double p = robust_info_power(gamma, sigma2, norm, eps);
      sol.powers[i] = p;
      sol.user_multipliers[i] = robust_user_multiplier(p, gamma, norm, eps);
    }
    const double eps_e = channels.eve_error_radius;
    sol.eve_multipliers[i] =
        eps_e == 0.0 ? std::optional<double>()
                     : std::optional<double>(channels.eve_noise_var /
                                             (eps_e * eps_e));
  }
  sol.an_power = 0.0;
  return sol;
}

BeamformingSolution solve_non_robust(const ChannelSet& channels,
                                     const TargetSinrs& targets) {
  check_compatible(channels, targets);
  BeamformingSolution sol = directions_only(channels);
  sol.method = Method::kNonRobust;
  for (int i = 0; i < channels.n_users(); ++i) {
    const double norm2 = channels.estimates.col(i).squaredNorm();
    sol.powers[i] = targets.gamma[i] * channels.noise_vars[i] / norm2;
  }
  sol.an_power = 0.0;
  return sol;
}

BeamformingSolution solve_an_split(const ChannelSet& channels,
                                   const TargetSinrs& targets,
                                   double an_fraction) {
  if (!(an_fraction >= 0.0) || !(an_fraction < 1.0)) {
    throw std::invalid_argument("solve_an_split: fraction must lie in [0, 1)");
  }
  BeamformingSolution sol = solve_robust(channels, targets);
  sol.method = Method::kAnSplit;
  const double budget = sol.total_power();
  sol.an_power = an_fraction * budget;
  sol.powers *= 1.0 - an_fraction;
  // baseline heuristic: the robust certificates no longer apply
  sol.user_multipliers.assign(channels.n_users(), std::nullopt);
  sol.eve_multipliers.assign(channels.n_users(), std::nullopt);
  return sol;
}

CovarianceViews covariance_views(const BeamformingSolution& solution) {
  CovarianceViews v;
  const int k = static_cast<int>(solution.powers.size());
  v.signal.reserve(k);
  for (int i = 0; i < k; ++i) {
    v.signal.push_back(solution.powers[i] * solution.directions.col(i) *
                       solution.directions.col(i).adjoint());
  }
  v.an = solution.an_power * solution.an_direction *
         solution.an_direction.adjoint();
  return v;
}

}  // namespace secbeam
