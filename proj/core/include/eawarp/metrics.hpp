#pragma once

#include <span>

#include "eawarp/align.hpp"
#include "eawarp/grid.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// Pearson correlation of two functions on a common grid.
/// Throws std::domain_error when either has zero variance.
double pearson(const SampledFunction& a, const SampledFunction& b);

/// Squared L2 distance between two warpings on a common grid (trapezoid
/// rule over the unit domain). Symmetric; zero iff equal on the grid.
double warping_l2(const WarpingFunction& a, const WarpingFunction& b);

/// Mean squared difference between the correlations attainable with the
/// true aligned responses and the correlations achieved by the estimates:
/// mean over pairs of (pearson(x, a) - pearson(x, y_hat))^2.
double mse_ea(std::span<const SampledFunction> targets,
              std::span<const SampledFunction> aligned_true,
              std::span<const SampledFunction> aligned_estimated);

/// Everything the simulation study tabulates for one (pair, method) run.
struct PairMetrics {
  double rho_a = 0;        // pearson(a, y_hat): agreement with the ideal response
  double rho_x = 0;        // pearson(x, y_hat): agreement with the target
  double d_gamma = 0;      // squared L2 error of the estimated warping
  double d_q_a = 0;        // squared representation distance y_hat vs a
  double d_q_x = 0;        // squared representation distance y_hat vs x
  double rho_gap = 0;      // rho_x - rho_a: positive excess tracking of the target
  double dq_gap = 0;       // d_q_x - d_q_a: negative when y_hat drifts toward x
  double warp_amount = 0;  // squared L2 distance of gamma-hat from identity
  double phase_dist = 0;   // phase distance of gamma-hat
};

/// Scores one alignment against the simulation ground truth. x and a live on
/// the pair's native grid; gamma_true is the warping that would undo the
/// perceiver's time distortion exactly.
PairMetrics evaluate_pair(const SampledFunction& x, const SampledFunction& a,
                          const WarpingFunction& gamma_true,
                          const AlignmentResult& r);

}  // namespace eawarp
