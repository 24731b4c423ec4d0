#pragma once

#include <vector>

#include "eawarp/grid.hpp"

namespace eawarp {

/// Time warping: a nondecreasing surjection of [0,1] onto itself, stored as
/// samples on a uniform unit grid and evaluated by linear interpolation.
class WarpingFunction {
 public:
  /// Throws std::invalid_argument unless grid is the unit grid, values has
  /// grid.n() entries with values.front() == 0, values.back() == 1, all
  /// entries in [0,1] and nondecreasing.
  WarpingFunction(UniformGrid grid, std::vector<double> values);

  /// Sanitizing factory for computed samples: pins the endpoints to 0 and 1,
  /// clamps to [0,1], and flattens decreases of at most 1e-9 (pure rounding
  /// noise). Larger decreases still throw: they indicate a logic error, not
  /// floating-point jitter.
  static WarpingFunction from_samples(UniformGrid grid,
                                      std::vector<double> values);

  static WarpingFunction identity(int n);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return grid_.n(); }
  double operator[](int m) const { return values_[static_cast<size_t>(m)]; }

  /// Linear interpolation at t in [0,1], exact at grid nodes.
  double eval(double t) const;

 private:
  WarpingFunction() : grid_(UniformGrid::unit(2)) {}
  UniformGrid grid_;
  std::vector<double> values_;
};

/// f composed with g, sampled on f's grid: (f o g)(t_m) = f(g(t_m)).
/// Since g maps grid nodes to grid nodes only approximately, values are
/// linearly interpolated; warping by the identity is exact on values.
/// Throws std::invalid_argument unless both live on unit grids.
SampledFunction apply_warping(const SampledFunction& f,
                              const WarpingFunction& g);

/// Pointwise inverse, sampled on the same grid. Flat stretches of g collapse
/// to their left endpoint (the inverse jumps there; we take the first preimage).
/// Round trips f -> f o g -> (f o g) o g^-1 incur interpolation error at most
/// C * dt * Lip(f) with C = sup(g') / inf(g') + 1 over segments where g
/// strictly increases.
WarpingFunction invert_warping(const WarpingFunction& g);

/// (g1 o g2)(t) = g1(g2(t)), sampled on g2's grid.
WarpingFunction compose_warpings(const WarpingFunction& g1,
                                 const WarpingFunction& g2);

/// Largest |g(t) - t| over grid nodes, scaled back to native time units.
/// For piecewise-linear g the maximum over [0,1] is attained at a node, so
/// the grid maximum is the true supremum.
double sup_deviation(const WarpingFunction& g, double native_span);

/// Constraint |gamma(t) - t| <= nu, expressed on the normalized domain.
/// Carries both the native bound and its normalized form; the unbounded
/// state reports +infinity so feasibility tests need no special casing.
/// Also the natural container for the drift limit of the simulator, which
/// shares the same normalization.
class NormalizedBound {
 public:
  static NormalizedBound unbounded();

  /// Bound of nu native time units on a domain of the given span.
  /// Throws std::invalid_argument unless 0 < nu and 0 < span, both finite.
  static NormalizedBound native(double nu, double span);

  bool bounded() const { return bounded_; }
  double nu_native() const { return nu_native_; }  // +inf when unbounded
  double nu_norm() const { return nu_norm_; }      // +inf when unbounded

 private:
  NormalizedBound() = default;
  double nu_native_ = 0, nu_norm_ = 0;
  bool bounded_ = false;
};

}  // namespace eawarp
