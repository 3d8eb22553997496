#pragma once

// Deterministic counter-based random generator with hand-rolled variate
// transforms. The engine is a Weyl-sequence + 64-bit finalizer (splitmix64):
// substream s of seed x starts at an avalanche-mixed state, so (seed, stream)
// pairs give statistically independent, platform-identical sequences. All
// transforms (uniform, Gaussian, Gamma) are implemented here rather than via
// std::<random> distributions, whose output is implementation-defined.

#include <cmath>
#include <cstdint>

namespace fracmeas {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + 0x9E3779B97F4A7C15ULL * mix(stream + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t nextU64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniformOpen() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  // Standard normal via Box-Muller (second value cached).
  double gaussian() {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    const double u1 = uniformOpen();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    hasSpare_ = true;
    return radius * std::cos(angle);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1 by
  // G_a = G_{a+1} * U^{1/a}. Underflow to zero for very small shapes is
  // acceptable to callers (they treat 0 as the continuous limit).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double boost = std::exp(std::log(uniformOpen()) / shape);
      return gamma(shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = gaussian();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniformOpen();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace fracmeas
