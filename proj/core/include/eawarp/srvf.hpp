#pragma once

#include <vector>

#include "eawarp/grid.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// Square-root slope representation of a function on the unit grid.
class Srvf {
 public:
  Srvf(UniformGrid grid, std::vector<double> values);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return grid_.n(); }
  double operator[](int m) const { return values_[static_cast<size_t>(m)]; }
  double eval(double t) const;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

/// q(t) = sign(f'(t)) * sqrt(|f'(t)|), with f' by central differences
/// (one-sided at the ends). Requires the unit grid and n >= 3.
/// f(t) = t maps to q == 1 exactly; constants map to q == 0.
Srvf to_srvf(const SampledFunction& f);

/// Warped representation (q, g)(t) = q(g(t)) * sqrt(g'(t)). Applying a
/// warping to a function and taking its representation commutes with this
/// action up to discretization error, and the L2 norm is preserved in the
/// continuum; both hold here to grid accuracy. Requires q and g sampled on
/// the same unit grid.
Srvf group_action(const Srvf& q, const WarpingFunction& g);

/// L2 distance between two representations on a common grid (trapezoid rule).
double srvf_l2_distance(const Srvf& a, const Srvf& b);

/// Squared L2 distance; the simulation metrics report squared distances.
double srvf_l2_distance_sq(const Srvf& a, const Srvf& b);

/// Geodesic distance on the unit sphere between sqrt(g') and the constant 1:
/// arccos of integral sqrt(g'(t)) dt, clamped into [-1, 1]. Ranges over
/// [0, pi/2]; exactly 0 for the identity warping.
double phase_distance(const WarpingFunction& g);

}  // namespace eawarp
