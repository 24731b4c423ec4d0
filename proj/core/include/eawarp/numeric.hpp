#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace eawarp {

// Quadrature and interpolation helpers shared by the whole library.
// All integrals in this project are trapezoid-rule approximations on
// uniform grids; everything evaluated off-grid is linearly interpolated.

/// Trapezoid integral of uniformly sampled values with spacing dt.
inline double trapezoid(std::span<const double> v, double dt) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dt;
}

/// Trapezoid integral over the unit interval [0,1] sampled at n equispaced
/// points, computed as a weighted mean so that a constant integrand of 1
/// integrates to exactly 1 (the weights sum to n-1 exactly in floating point).
inline double unit_trapezoid(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s / static_cast<double>(v.size() - 1);
}

/// Linear interpolation at fractional index u in [0, n-1].
/// Indices within 1e-12 of an integer snap to it, so grid nodes are
/// reproduced exactly (no interpolation noise on pass-through evaluations).
inline double lerp_index(std::span<const double> v, double u) {
  const double last = static_cast<double>(v.size() - 1);
  u = std::clamp(u, 0.0, last);
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-12) return v[static_cast<std::size_t>(r)];
  const auto i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

/// Pearson correlation of two equal-length samples, or nullopt when either
/// has zero variance (centered sum of squares exactly zero).
inline std::optional<double> pearson_raw(std::span<const double> a,
                                         std::span<const double> b) {
  const std::size_t n = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

/// First derivative of samples spaced by the point positions ts:
/// central differences at interior points, one-sided at the boundaries.
/// Computed as ratios of like-constructed differences so that the identity
/// map (v == ts) has derivative exactly 1 at every point.
inline std::vector<double> finite_difference(std::span<const double> v,
                                             std::span<const double> ts) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  d[0] = (v[1] - v[0]) / (ts[1] - ts[0]);
  for (std::size_t m = 1; m + 1 < n; ++m)
    d[m] = (v[m + 1] - v[m - 1]) / (ts[m + 1] - ts[m - 1]);
  d[n - 1] = (v[n - 1] - v[n - 2]) / (ts[n - 1] - ts[n - 2]);
  return d;
}

}  // namespace eawarp
