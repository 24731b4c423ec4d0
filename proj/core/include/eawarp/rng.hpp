#pragma once

#include <cstdint>

namespace eawarp {

/// Deterministic 64-bit generator (splitmix64 step function) with cheap
/// derived streams. Streams indexed by (seed, i, j) are statistically
/// independent for distinct indices and bit-reproducible across platforms,
/// so parallel and serial runs that assign one stream per work item draw
/// identical variates.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for work item (i, j) under the given seed.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t i,
                           std::uint64_t j);

  std::uint64_t next_u64();

  /// Uniform on (0, 1] (never zero, safe under log).
  double next_unit();

  /// Uniform on [a, b).
  double uniform(double a, double b);

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call
  /// and never caches, keeping the draw count deterministic.
  double normal();

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze, with the shape < 1
  /// boost. Throws std::invalid_argument unless shape > 0 and scale > 0.
  double gamma(double shape, double scale);

 private:
  std::uint64_t state_;
};

}  // namespace eawarp
