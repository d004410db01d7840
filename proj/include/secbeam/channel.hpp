#pragma once

#include <cstdint>
#include <vector>

#include "secbeam/config.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/types.hpp"

namespace secbeam {

// Orthogonally estimated downlink channels for K users plus one eavesdropper.
// Column k of estimates is the estimate for user k; per-entity error radii
// bound the estimation error in Euclidean norm.
struct ChannelSet {
  CxMatrix estimates;     // N x K
  CxVector eve_estimate;  // N
  RealVector error_radii; // K
  double eve_error_radius = 0.0;
  RealVector noise_vars;  // K
  double eve_noise_var = 1.0;
  std::vector<std::vector<int>> dft_indices;  // beam assignment per user
  std::vector<int> eve_dft_indices;
  CxMatrix true_channels;  // N x K, zero columns = unknown
  CxVector eve_true;       // size 0 = unknown

  int n_antennas() const { return static_cast<int>(estimates.rows()); }
  int n_users() const { return static_cast<int>(estimates.cols()); }
};

// Array response of a uniform linear array; entry n is
// exp(-j 2 pi (d/lambda) n sin(theta)), so the squared norm is n_antennas.
CxVector steering_vector(const UlaGeometry& geometry, double theta);

// Channel of one terminal as a midpoint-rule discretization of the steering
// integral over its angular spread.  Each quadrature ray gets an independent
// uniform phase when phase_jitter is set; seed fixes the realization.
CxVector synthesize_channel(const UlaGeometry& geometry,
                            const AngularSpread& spread, int n_quadrature,
                            std::uint64_t seed, bool phase_jitter = true);

struct BdmaEstimate {
  CxVector estimate;  // projection onto the assigned DFT columns
  double residual;    // norm of the rejected component
};

// Projects a channel onto the span of the unit DFT columns with the given
// indices (the beam-domain estimate).
BdmaEstimate bdma_estimate(const CxVector& channel,
                           const std::vector<int>& indices);

// Error vector drawn uniformly from the complex ball (or sphere) of the given
// radius.  Draw order per call: n complex gaussians, then one uniform.
CxVector sample_error(int n, double radius, Rng& rng,
                      BallSampler sampler = BallSampler::kUniformBall);

inline CxVector sample_true_channel(const CxVector& estimate, double radius,
                                    Rng& rng,
                                    BallSampler sampler = BallSampler::kUniformBall) {
  return estimate + sample_error(static_cast<int>(estimate.size()), radius,
                                 rng, sampler);
}

// Builds the channel set for a scenario.  Synthetic mode places estimates on
// scaled DFT columns directly; physical mode synthesizes spread channels and
// estimates them through bdma_estimate, with the error radius taken as
// max(projection residual, g * estimate norm).
ChannelSet make_channel_set(const ScenarioConfig& config, std::uint64_t seed);

// Checks structural invariants (orthogonal estimates, radii inside the
// estimate norms, positive noise, disjoint beam assignments); throws
// std::invalid_argument on violation.
void validate(const ChannelSet& channels);

}  // namespace secbeam
