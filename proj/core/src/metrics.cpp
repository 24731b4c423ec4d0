#include "eawarp/metrics.hpp"

#include <stdexcept>

#include "eawarp/numeric.hpp"
#include "eawarp/srvf.hpp"

namespace eawarp {

double pearson(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("pearson: functions must share one grid");
  const auto rho = pearson_raw(a.values(), b.values());
  if (!rho.has_value())
    throw std::domain_error("pearson: a series has zero variance");
  return *rho;
}

double warping_l2(const WarpingFunction& a, const WarpingFunction& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("warping_l2: warpings must share one grid");
  std::vector<double> e(static_cast<size_t>(a.size()));
  for (int m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    e[static_cast<size_t>(m)] = d * d;
  }
  return unit_trapezoid(e);
}

double mse_ea(std::span<const SampledFunction> targets,
              std::span<const SampledFunction> aligned_true,
              std::span<const SampledFunction> aligned_estimated) {
  if (targets.size() != aligned_true.size() ||
      targets.size() != aligned_estimated.size())
    throw std::invalid_argument("mse_ea: input lengths differ");
  if (targets.empty()) throw std::invalid_argument("mse_ea: no pairs");
  double acc = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double ideal = pearson(targets[i], aligned_true[i]);
    const double got = pearson(targets[i], aligned_estimated[i]);
    const double d = ideal - got;
    acc += d * d;
  }
  return acc / static_cast<double>(targets.size());
}

PairMetrics evaluate_pair(const SampledFunction& x, const SampledFunction& a,
                          const WarpingFunction& gamma_true,
                          const AlignmentResult& r) {
  PairMetrics pm;
  pm.rho_a = pearson(a, r.aligned);
  pm.rho_x = pearson(x, r.aligned);
  pm.d_gamma = warping_l2(gamma_true, r.warping);
  const Srvf q_a = to_srvf(rescale_to_unit(a).fn);
  const Srvf q_x = to_srvf(rescale_to_unit(x).fn);
  const Srvf q_hat = to_srvf(rescale_to_unit(r.aligned).fn);
  pm.d_q_a = srvf_l2_distance_sq(q_a, q_hat);
  pm.d_q_x = srvf_l2_distance_sq(q_x, q_hat);
  pm.rho_gap = pm.rho_x - pm.rho_a;
  pm.dq_gap = pm.d_q_x - pm.d_q_a;
  pm.warp_amount =
      warping_l2(r.warping, WarpingFunction::identity(r.warping.size()));
  pm.phase_dist = r.phase_distance;
  return pm;
}

}  // namespace eawarp
