#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "secbeam/types.hpp"

namespace secbeam {

// splitmix64 finalizer.
inline std::uint64_t hash64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a stream index
// (trial number, worker-independent by construction).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  return hash64(base + 0x9e3779b97f4a7c15ull * (index + 1));
}

// Deterministic RNG wrapper.  All randomness in the library flows through
// this class so that a (seed, draw order) pair fixes every sample exactly,
// independent of platform math library differences in std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; second sample of each pair is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex normal with unit variance.
  Complex cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re * M_SQRT1_2, im * M_SQRT1_2);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace secbeam
