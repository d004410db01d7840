#include "secbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace secbeam {

namespace {

// Unit-norm DFT column m of size n.
CxVector dft_column(int n, int m) {
  CxVector f(n);
  const double base = -2.0 * M_PI * static_cast<double>(m) / n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    f[i] = std::polar(scale, base * i);
  }
  return f;
}

double spectrum_weight(const AngularSpread& spread, double theta) {
  switch (spread.spectrum) {
    case AngularSpread::Spectrum::kUniform:
      return 1.0;
    case AngularSpread::Spectrum::kTruncatedGaussian: {
      const double s = spread.gaussian_std > 0 ? spread.gaussian_std
                                               : 0.25 * spread.width;
      if (s <= 0) return 1.0;
      const double d = (theta - spread.center) / s;
      return std::exp(-0.5 * d * d);
    }
  }
  return 1.0;
}

// Spatial frequency of DFT index m, wrapped to [-0.5, 0.5).
double wrapped_frequency(int m, int n) {
  double f = static_cast<double>(m) / n;
  if (f >= 0.5) f -= 1.0;
  return f;
}

double frequency_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

// Distance from frequency f to the interval [lo, hi], accounting for the
// 1-periodicity of beam frequencies.
double interval_distance(double f, double lo, double hi) {
  double best = 2.0;
  for (int s = -1; s <= 1; ++s) {
    const double x = f + s;
    const double d = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
    best = std::min(best, d);
  }
  return best;
}

// Assigns disjoint beam sets: entities sorted by center angle claim every
// free index whose frequency falls within their spread window (plus a guard
// band of 0.75/n); an entity left empty takes the nearest free index.
std::vector<std::vector<int>> assign_beam_indices(
    const UlaGeometry& geometry, const std::vector<AngularSpread>& spreads) {
  const int n = geometry.n_antennas;
  const int count = static_cast<int>(spreads.size());
  if (count > n) {
    throw std::invalid_argument("assign_beam_indices: more terminals than beams");
  }
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return spreads[a].center < spreads[b].center;
  });
  std::vector<bool> taken(n, false);
  std::vector<std::vector<int>> assigned(count);
  const double guard = 0.75 / n;
  for (int rank = 0; rank < count; ++rank) {
    const int e = order[rank];
    const double lo = geometry.spacing_over_lambda *
                      std::sin(spreads[e].center - 0.5 * spreads[e].width);
    const double hi = geometry.spacing_over_lambda *
                      std::sin(spreads[e].center + 0.5 * spreads[e].width);
    for (int m = 0; m < n; ++m) {
      if (taken[m]) continue;
      if (interval_distance(wrapped_frequency(m, n), lo, hi) <= guard) {
        taken[m] = true;
        assigned[e].push_back(m);
      }
    }
    if (assigned[e].empty()) {
      const double want = geometry.spacing_over_lambda * std::sin(spreads[e].center);
      int best = -1;
      double best_d = 2.0;
      for (int m = 0; m < n; ++m) {
        if (taken[m]) continue;
        const double d = frequency_distance(wrapped_frequency(m, n), want);
        if (d < best_d) {
          best_d = d;
          best = m;
        }
      }
      if (best < 0) {
        throw std::invalid_argument("assign_beam_indices: ran out of beams");
      }
      taken[best] = true;
      assigned[e].push_back(best);
    }
  }
  return assigned;
}

}  // namespace

CxVector steering_vector(const UlaGeometry& geometry, double theta) {
  if (geometry.n_antennas <= 0) {
    throw std::invalid_argument("steering_vector: n_antennas must be positive");
  }
  CxVector a(geometry.n_antennas);
  const double step = -2.0 * M_PI * geometry.spacing_over_lambda * std::sin(theta);
  for (int n = 0; n < geometry.n_antennas; ++n) {
    a[n] = std::polar(1.0, step * n);
  }
  return a;
}

CxVector synthesize_channel(const UlaGeometry& geometry,
                            const AngularSpread& spread, int n_quadrature,
                            std::uint64_t seed, bool phase_jitter) {
  if (n_quadrature <= 0) {
    throw std::invalid_argument("synthesize_channel: n_quadrature must be positive");
  }
  Rng rng(seed);
  CxVector h = CxVector::Zero(geometry.n_antennas);
  if (spread.width == 0.0) {
    const double phase = phase_jitter ? 2.0 * M_PI * rng.uniform() : 0.0;
    h = std::polar(spectrum_weight(spread, spread.center), phase) *
        steering_vector(geometry, spread.center);
    return h;
  }
  const double dtheta = spread.width / n_quadrature;
  const double left = spread.center - 0.5 * spread.width;
  for (int i = 0; i < n_quadrature; ++i) {
    const double theta = left + (i + 0.5) * dtheta;
    const double phase = phase_jitter ? 2.0 * M_PI * rng.uniform() : 0.0;
    const Complex gain = std::polar(spectrum_weight(spread, theta) * dtheta, phase);
    h += gain * steering_vector(geometry, theta);
  }
  return h;
}

BdmaEstimate bdma_estimate(const CxVector& channel,
                           const std::vector<int>& indices) {
  const int n = static_cast<int>(channel.size());
  CxVector est = CxVector::Zero(n);
  for (int m : indices) {
    if (m < 0 || m >= n) {
      throw std::invalid_argument("bdma_estimate: DFT index out of range");
    }
    const CxVector f = dft_column(n, m);
    est += f * f.dot(channel);
  }
  return {est, (channel - est).norm()};
}

CxVector sample_error(int n, double radius, Rng& rng, BallSampler sampler) {
  CxVector d(n);
  for (int i = 0; i < n; ++i) d[i] = rng.cgaussian();
  const double u = rng.uniform();
  if (radius == 0.0) return CxVector::Zero(n);
  double norm = d.norm();
  while (norm == 0.0) {  // essentially unreachable; keeps the scaling defined
    for (int i = 0; i < n; ++i) d[i] = rng.cgaussian();
    norm = d.norm();
  }
  double r = radius;
  if (sampler == BallSampler::kUniformBall) {
    r *= std::pow(u, 1.0 / (2.0 * n));
  }
  return d * (r / norm);
}

ChannelSet make_channel_set(const ScenarioConfig& config, std::uint64_t seed) {
  const int n = config.n_antennas;
  const int k = config.n_users;
  if (n <= 0 || k <= 0) {
    throw std::invalid_argument("make_channel_set: need positive dimensions");
  }
  if (k + 1 > n) {
    throw std::invalid_argument(
        "make_channel_set: need n_antennas >= n_users + 1 for orthogonal beams");
  }
  if (config.g < 0.0 || config.g >= 1.0) {
    throw std::invalid_argument("make_channel_set: g must lie in [0, 1)");
  }
  if (config.sigma2 <= 0.0 || config.sigma2_e <= 0.0) {
    throw std::invalid_argument("make_channel_set: noise variances must be positive");
  }

  ChannelSet set;
  set.estimates.resize(n, k);
  set.error_radii.resize(k);
  set.noise_vars = RealVector::Constant(k, config.sigma2);
  set.eve_noise_var = config.sigma2_e;
  set.dft_indices.resize(k);

  if (config.mode == ChannelMode::kSynthetic) {
    const double norm2 = config.synthetic_norm2 > 0.0 ? config.synthetic_norm2
                                                      : static_cast<double>(n);
    const double scale = std::sqrt(norm2);
    for (int j = 0; j <= k; ++j) {
      const int idx = static_cast<int>((static_cast<long long>(j) * n) / (k + 1));
      CxVector col = scale * dft_column(n, idx);
      if (j < k) {
        set.estimates.col(j) = col;
        set.dft_indices[j] = {idx};
        set.error_radii[j] = config.g * col.norm();
      } else {
        set.eve_estimate = col;
        set.eve_dft_indices = {idx};
        set.eve_error_radius = config.g * col.norm();
      }
    }
    validate(set);
    return set;
  }

  // physical mode
  UlaGeometry geometry{n, config.spacing_over_lambda};
  std::vector<AngularSpread> spreads;  // users first, eavesdropper last
  if (config.user_spreads.empty()) {
    // Auto placement: K+1 point spreads on exact beam angles, evenly spread
    // over the +-60 degree sector; the eavesdropper takes the middle slot.
    const double fmax = geometry.spacing_over_lambda * std::sin(M_PI / 3.0);
    std::vector<double> centers(k + 1);
    for (int j = 0; j <= k; ++j) {
      const double f = (k == 0) ? 0.0 : -fmax + 2.0 * fmax * j / k;
      const double fq = std::round(f * n) / n;  // snap to a beam frequency
      centers[j] = std::asin(std::clamp(
          fq / geometry.spacing_over_lambda, -1.0, 1.0));
    }
    const int eve_slot = (k + 1) / 2;
    for (int j = 0; j <= k; ++j) {
      AngularSpread s;
      s.center = centers[j == k ? eve_slot : (j < eve_slot ? j : j + 1)];
      s.width = 2.0 * M_PI / 180.0;
      spreads.push_back(s);
    }
  } else {
    if (static_cast<int>(config.user_spreads.size()) != k) {
      throw std::invalid_argument("make_channel_set: need one spread per user");
    }
    if (!config.eve_spread) {
      throw std::invalid_argument("make_channel_set: physical mode needs an eavesdropper spread");
    }
    spreads = config.user_spreads;
    spreads.push_back(*config.eve_spread);
  }

  const std::vector<std::vector<int>> assigned =
      assign_beam_indices(geometry, spreads);

  set.true_channels.resize(n, k);
  for (int j = 0; j <= k; ++j) {
    const CxVector h = synthesize_channel(geometry, spreads[j],
                                          config.n_quadrature,
                                          mix_seed(seed, j));
    const BdmaEstimate est = bdma_estimate(h, assigned[j]);
    const double norm = est.estimate.norm();
    if (norm == 0.0) {
      throw std::invalid_argument(
          "make_channel_set: a channel has no energy on its assigned beam");
    }
    const double radius = std::max(est.residual, config.g * norm);
    if (j < k) {
      set.estimates.col(j) = est.estimate;
      set.true_channels.col(j) = h;
      set.dft_indices[j] = assigned[j];
      set.error_radii[j] = radius;
    } else {
      set.eve_estimate = est.estimate;
      set.eve_true = h;
      set.eve_dft_indices = assigned[j];
      set.eve_error_radius = radius;
    }
  }
  validate(set);
  return set;
}

void validate(const ChannelSet& channels) {
  const int n = channels.n_antennas();
  const int k = channels.n_users();
  if (n <= 0 || k <= 0 || channels.eve_estimate.size() != n ||
      channels.error_radii.size() != k || channels.noise_vars.size() != k) {
    throw std::invalid_argument("ChannelSet: inconsistent sizes");
  }
  for (int i = 0; i <= k; ++i) {
    const CxVector& a = i < k ? CxVector(channels.estimates.col(i))
                              : channels.eve_estimate;
    const double na = a.norm();
    const double radius = i < k ? channels.error_radii[i]
                                : channels.eve_error_radius;
    if (na == 0.0) {
      throw std::invalid_argument("ChannelSet: zero channel estimate");
    }
    if (radius < 0.0 || radius >= na) {
      throw std::invalid_argument(
          "ChannelSet: error radius must lie in [0, estimate norm)");
    }
    for (int j = i + 1; j <= k; ++j) {
      const CxVector& b = j < k ? CxVector(channels.estimates.col(j))
                                : channels.eve_estimate;
      if (std::abs(a.dot(b)) > 1e-9 * na * b.norm()) {
        throw std::invalid_argument("ChannelSet: estimates are not orthogonal");
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (channels.noise_vars[i] <= 0.0) {
      throw std::invalid_argument("ChannelSet: noise variances must be positive");
    }
  }
  if (channels.eve_noise_var <= 0.0) {
    throw std::invalid_argument("ChannelSet: noise variances must be positive");
  }
  std::vector<int> all;
  for (const auto& s : channels.dft_indices) {
    all.insert(all.end(), s.begin(), s.end());
  }
  all.insert(all.end(), channels.eve_dft_indices.begin(),
             channels.eve_dft_indices.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("ChannelSet: beam assignments overlap");
  }
}

}  // namespace secbeam
