#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "eawarp/grid.hpp"
#include "eawarp/rng.hpp"
#include "eawarp/warping.hpp"

namespace testutil {

// Smooth random function on the given grid: a few sinusoids with decaying
// amplitude plus a linear trend. Lipschitz-bounded and infinitely smooth,
// so discretization-error assertions behave predictably.
inline eawarp::SampledFunction smooth_function(eawarp::SplitMix64& rng,
                                               const eawarp::UniformGrid& grid,
                                               int terms = 4) {
  std::vector<double> amp, phase, freq;
  for (int k = 1; k <= terms; ++k) {
    amp.push_back(rng.uniform(-1.0, 1.0) / k);
    phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    freq.push_back(static_cast<double>(k));
  }
  const double trend = rng.uniform(-1.0, 1.0);
  std::vector<double> v(static_cast<size_t>(grid.n()));
  for (int m = 0; m < grid.n(); ++m) {
    const double tau =
        static_cast<double>(m) / static_cast<double>(grid.n() - 1);
    double s = trend * tau;
    for (int k = 0; k < terms; ++k)
      s += amp[static_cast<size_t>(k)] *
           std::sin(2.0 * std::numbers::pi * freq[static_cast<size_t>(k)] * tau +
                    phase[static_cast<size_t>(k)]);
    v[static_cast<size_t>(m)] = s;
  }
  return {grid, std::move(v)};
}

// Strictly increasing random warping: cumulative sums of a smooth positive
// slope field exp(A sin(2 pi f tau + phi)), normalized to end at exactly 1.
// Slope ratio sup/inf is at most exp(2A).
inline eawarp::WarpingFunction random_warping(eawarp::SplitMix64& rng, int n,
                                              double max_log_amp = 0.8) {
  const double A = rng.uniform(0.1, max_log_amp);
  const double f = rng.uniform(0.5, 2.5);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> v(static_cast<size_t>(n));
  v[0] = 0.0;
  for (int m = 1; m < n; ++m) {
    const double tau = static_cast<double>(m) / static_cast<double>(n - 1);
    v[static_cast<size_t>(m)] =
        v[static_cast<size_t>(m - 1)] +
        std::exp(A * std::sin(2.0 * std::numbers::pi * f * tau + phi));
  }
  const double total = v[static_cast<size_t>(n - 1)];
  for (int m = 1; m < n; ++m) v[static_cast<size_t>(m)] /= total;
  v[static_cast<size_t>(n - 1)] = 1.0;
  return {eawarp::UniformGrid::unit(n), std::move(v)};
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testutil
