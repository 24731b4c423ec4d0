#include "eawarp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eawarp {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 output finalizer; also used to mix stream indices.
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t i,
                              std::uint64_t j) {
  std::uint64_t s = mix(seed + kGamma);
  s = mix(s ^ ((i + 1) * 0xC2B2AE3D27D4EB4Full));
  s = mix(s ^ ((j + 1) * 0x165667B19E3779F9ull));
  return SplitMix64(s);
}

std::uint64_t SplitMix64::next_u64() {
  state_ += kGamma;
  return mix(state_);
}

double SplitMix64::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::uniform(double a, double b) {
  return a + (b - a) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  const double u1 = next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double SplitMix64::gamma(double shape, double scale) {
  if (!(shape > 0) || !(scale > 0))
    throw std::invalid_argument("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // Boost: X ~ Gamma(shape + 1), then X * U^(1/shape) ~ Gamma(shape).
    const double g = gamma(shape + 1.0, 1.0);
    return scale * g * std::pow(next_unit(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit();
    if (u < 1.0 - 0.0331 * z * z * z * z) return scale * d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

}  // namespace eawarp
