#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eawarp/grid.hpp"

namespace eawarp {

/// Nadaraya-Watson smoother with a Gaussian kernel of the given bandwidth
/// (native time units, acts as the kernel's standard deviation). Full
/// support: every output point is a weighted mean of all inputs, so
/// constants pass through unchanged. Throws std::invalid_argument unless
/// bandwidth > 0.
SampledFunction kernel_smooth(const SampledFunction& f, double bandwidth);

struct SplineFit {
  SampledFunction smoothed;
  double lambda = 0;          // penalty actually used
  double gcv = 0;             // generalized cross-validation score at lambda
  bool gcv_selected = false;  // true when lambda came from the GCV search
};

/// Natural cubic smoothing spline evaluated at the grid points: minimizes
/// sum (y_i - g(t_i))^2 + lambda * integral g''^2. lambda == 0 returns the
/// data unchanged (the interpolating spline agrees with the data at knots);
/// lambda -> infinity approaches the least-squares line. Pass lambda < 0 to
/// select lambda by minimizing GCV over the grid from spline_gcv_candidates.
/// Requires n >= 4 points.
SplineFit spline_smooth_fit(const SampledFunction& f, double lambda);

/// Convenience wrappers over spline_smooth_fit.
SampledFunction spline_smooth(const SampledFunction& f, double lambda);
SampledFunction spline_smooth_gcv(const SampledFunction& f);

/// GCV(lambda) = (RSS/n) / (1 - tr(A)/n)^2 where A is the smoother matrix.
double spline_gcv_score(const SampledFunction& f, double lambda);

/// The candidate penalties scanned by the GCV search: 61 log-spaced values
/// covering 1e-8 .. 1e4, scaled by a grid-dependent normalizer so the range
/// brackets both the interpolation and the straight-line regimes.
std::vector<double> spline_gcv_candidates(const SampledFunction& f);

/// Resample f onto n equispaced points over the same domain by linear
/// interpolation. n equal to the current size returns f unchanged.
SampledFunction regrid(const SampledFunction& f, int n);

struct PairFilterResult {
  struct Dropped {
    std::size_t index;
    double correlation;  // meaningless when undefined is set
    bool undefined;      // a zero-variance series made the correlation undefined
  };
  std::vector<std::size_t> kept;  // indices into the input arrays, ascending
  std::vector<Dropped> dropped;
};

/// Splits index-aligned (target, perceiver) pairs into kept and dropped:
/// dropped when the raw Pearson correlation is below threshold, or undefined
/// because either series has zero variance. Throws std::invalid_argument on
/// length mismatch or when a pair's grids differ.
PairFilterResult filter_negative_correlation(
    std::span<const SampledFunction> targets,
    std::span<const SampledFunction> perceivers, double threshold = 0.0);

}  // namespace eawarp
