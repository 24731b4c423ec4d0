#pragma once

#include <array>
#include <vector>

#include "eawarp/grid.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// One perceiver's data for the random-coefficient model: per stimulus j a
/// target trajectory x_j, the perceiver's (already aligned) response y_j on
/// the same grid, and the warping that produced it (identity when no
/// alignment was applied; only used by fit_metrics).
struct MixedModelData {
  std::vector<SampledFunction> x;
  std::vector<SampledFunction> y;
  std::vector<WarpingFunction> warpings;
};

/// Restricted-likelihood fit of
///   y_j(t) = beta0 + beta1 x_j(t) + b0_j + b1_j x_j(t) + eps_j(t),
/// with independent b0_j ~ N(0, sigma2_b0), b1_j ~ N(0, sigma2_b1) and
/// white residuals. Stimulus covariances V_j = sigma2 I + Z_j G Z_j' are
/// handled through the rank-2 update, so evaluation is O(1) per stimulus
/// after one pass over the data.
struct MixedModelFit {
  double beta0 = 0, beta1 = 0;
  double sigma2 = 0;     // residual variance
  double sigma2_b0 = 0;  // random intercept variance
  double sigma2_b1 = 0;  // random slope variance
  std::vector<std::array<double, 2>> blups;  // per-stimulus (b0_j, b1_j)
  double reml_loglik = 0;  // restricted log-likelihood at the optimum
  bool converged = false;
  int evaluations = 0;                    // criterion evaluations spent
  std::array<bool, 3> at_lower_bound{};   // sigma2, sigma2_b0, sigma2_b1
};

/// Throws std::invalid_argument unless there are >= 2 stimuli, each with
/// >= 3 points, x and y on a common grid per stimulus, and no constant x_j.
/// The optimizer is a Nelder-Mead search on log-variances started from
/// method-of-moments values with a fixed schedule of restarts, so fits are
/// deterministic. Variances are floored at 1e-10 times the response
/// variance; estimates within 10 floors set the at_lower_bound flag.
MixedModelFit fit_reml(const MixedModelData& data);

/// -2 times the restricted log-likelihood (up to no constants: the full
/// value) at the given variances, with beta profiled out by generalized
/// least squares. Exposed so optimality can be probed directly.
double reml_neg2_loglik(const MixedModelData& data, double sigma2,
                        double sigma2_b0, double sigma2_b1);

struct FitMetrics {
  double mean_phase = 0;  // mean phase distance of the stored warpings
  double vertical = 0;    // sum over stimuli of the squared L2 distance
                          // between y_j and the fitted mean + BLUP curve
};

FitMetrics fit_metrics(const MixedModelData& data, const MixedModelFit& fit);

}  // namespace eawarp
