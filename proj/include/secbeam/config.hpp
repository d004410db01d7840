#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace secbeam {

enum class ChannelMode { kSynthetic, kPhysical };
enum class BallSampler { kUniformBall, kUniformSphere };
enum class Method { kRobust, kNonRobust, kAnSplit };

struct UlaGeometry {
  int n_antennas = 64;
  double spacing_over_lambda = 0.5;  // element spacing d/lambda
};

// Angular power spread of one terminal as seen from the array.
struct AngularSpread {
  enum class Spectrum { kUniform, kTruncatedGaussian };
  double center = 0.0;  // radians
  double width = 0.0;   // radians; 0 means a point source
  Spectrum spectrum = Spectrum::kUniform;
  double gaussian_std = 0.0;  // radians, kTruncatedGaussian only
};

struct ScenarioConfig {
  int n_antennas = 64;
  int n_users = 8;
  double gamma_db = 10.0;    // per-user SINR floor
  double gamma_e_db = 0.0;   // per-target eavesdropper SINR cap
  double g = 0.5;            // error radius as a fraction of the estimate norm
  double sigma2 = 1.0;       // user noise variance
  double sigma2_e = 1.0;     // eavesdropper noise variance
  ChannelMode mode = ChannelMode::kSynthetic;
  int n_trials = 10000;
  std::uint64_t base_seed = 1;
  std::vector<Method> methods = {Method::kRobust, Method::kNonRobust,
                                 Method::kAnSplit};
  double an_fraction = 0.3;  // artificial-noise share for the AN baseline
  BallSampler sampler = BallSampler::kUniformBall;
  bool eve_sinr_mean_of_db = false;  // default reports dB of the mean linear
  double synthetic_norm2 = 0.0;      // 0 selects the default n_antennas

  // physical mode only
  double spacing_over_lambda = 0.5;
  std::vector<AngularSpread> user_spreads;  // auto-placed when empty
  std::optional<AngularSpread> eve_spread;
  int n_quadrature = 200;
};

}  // namespace secbeam
