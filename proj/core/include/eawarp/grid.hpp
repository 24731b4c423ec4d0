#pragma once

#include <vector>

namespace eawarp {

/// Uniform time grid: n equispaced points on [t0, t1], endpoints included.
class UniformGrid {
 public:
  /// Throws std::invalid_argument unless t0 < t1, n >= 2, and both finite.
  UniformGrid(double t0, double t1, int n);

  static UniformGrid unit(int n) { return UniformGrid(0.0, 1.0, n); }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int n() const { return n_; }
  double span() const { return t1_ - t0_; }
  double dt() const { return (t1_ - t0_) / static_cast<double>(n_ - 1); }
  bool is_unit() const { return t0_ == 0.0 && t1_ == 1.0; }

  /// m-th grid point; exact at both endpoints.
  double at(int m) const;

  bool operator==(const UniformGrid&) const = default;

 private:
  double t0_, t1_;
  int n_;
};

/// Real-valued function observed on a uniform grid.
class SampledFunction {
 public:
  /// Throws std::invalid_argument if values.size() != grid.n() or any value
  /// is not finite.
  SampledFunction(UniformGrid grid, std::vector<double> values);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return grid_.n(); }
  double operator[](int m) const { return values_[static_cast<size_t>(m)]; }

  /// Linear interpolation at time t, clamped to the domain.
  /// Exact at grid nodes (see lerp_index).
  double eval(double t) const;

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

struct UnitRescale {
  SampledFunction fn;  // same values on the unit grid [0, 1]
  UniformGrid native;  // original domain, kept to undo the rescale
};

/// Affinely maps the domain of f onto [0, 1]. Values are untouched; only the
/// grid labels change. The native grid travels with the result.
UnitRescale rescale_to_unit(const SampledFunction& f);

}  // namespace eawarp
