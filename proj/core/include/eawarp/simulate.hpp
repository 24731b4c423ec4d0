#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eawarp/align.hpp"
#include "eawarp/grid.hpp"
#include "eawarp/metrics.hpp"
#include "eawarp/rng.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// Distribution of the drift magnitude eta (native time units).
struct EtaDistribution {
  bool is_fixed = false;
  double value = 0;             // fixed mode
  double shape = 0, scale = 0;  // gamma mode

  static EtaDistribution gamma_dist(double shape, double scale);
  static EtaDistribution fixed(double value);
  std::string label() const;  // "gamma(30,1)" or "fixed(20)"
};

struct SimConfig {
  int n_targets = 20;    // I
  int n_perceivers = 50; // J per target
  int grid_points = 300;
  double domain_end = 299.0;  // grid covers [0, domain_end]
  EtaDistribution eta = EtaDistribution::gamma_dist(30.0, 1.0);
  double nu_align = 30.0;  // native units, used by default_methods
  std::vector<AlignmentMethod> methods;  // empty => default_methods()
  DpMode dp{};
  std::uint64_t seed = 1;
  int jobs = 1;

  /// The four study arms in report order: penalized elastic, unpenalized
  /// elastic, best fixed delay, no alignment.
  std::vector<AlignmentMethod> default_methods() const;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  std::string cell_label() const;
};

/// Target trajectory: cumulative sum of grid_points standard normal draws,
/// kernel-smoothed with bandwidth 10 grid steps. Consumes exactly
/// grid_points normals.
SampledFunction generate_target(int grid_points, double domain_end,
                                SplitMix64& rng);

/// The unsmoothed series underlying generate_target: the running sum of n
/// standard normal draws (a random walk; first entry is the first draw).
std::vector<double> generate_base_series(int n, SplitMix64& rng);

/// a = (1 - omega) * eps1 * x + omega * eps2, elementwise on the grid.
/// Pure arithmetic hook for the generator below; no validation beyond
/// matching sizes.
SampledFunction compose_aligned_perceiver(const SampledFunction& x,
                                          double omega,
                                          const SampledFunction& eps1,
                                          const SampledFunction& eps2);

/// Ideal (time-synchronized) perceiver response for target x. Draw order:
/// omega ~ U(0.5, 1), then the Brownian path behind eps1 (n - 1 normals,
/// scaled so the path has variance 1 at the right endpoint, started at 1,
/// smoothed with bandwidth 40 grid steps), then the base series behind eps2
/// (n normals, smoothed with bandwidth 20 grid steps). eps1 is a mild
/// multiplicative envelope around 1; eps2 carries the series-scale noise.
SampledFunction generate_aligned_perceiver(const SampledFunction& x,
                                           SplitMix64& rng);

/// Piecewise-linear distortion with two plateaus of constant shift +eta and
/// -eta. Interior knots are four sorted uniforms on the domain, rejected
/// until the plateaus each span at least two grid steps, the middle segment
/// is longer than 2 * eta (keeping its slope positive), and the outer knots
/// stay inside the domain. Requires 0 < eta < span / 4. Returned on the
/// normalized grid; its sup deviation equals eta exactly (attained on the
/// plateaus, which contain grid nodes).
WarpingFunction generate_warping(double eta, const UniformGrid& grid,
                                 SplitMix64& rng);

struct MetricSummary {
  double mean = 0, sd = 0;
};

struct MethodCell {
  std::string method;  // AlignmentMethod::label()
  int n_pairs = 0;     // pairs that completed
  int n_failed = 0;    // pairs dropped by an exception, recorded not fatal
  MetricSummary rho_a, rho_x, d_gamma, d_q_a, d_q_x;
  MetricSummary rho_gap, dq_gap, warp_amount, phase_dist;
  double mse = 0;  // mean squared (ideal corr - achieved corr)
};

struct SimulationReport {
  SimConfig config;
  std::string cell;  // config.cell_label()
  std::vector<MethodCell> methods;
};

/// Mean/sd fold over per-pair metrics in pair-index order, plus the MSE
/// against the ideal correlations. Entries without a value (failed pairs)
/// are skipped and counted. Exposed so the aggregation can be exercised on
/// hand-built pairs.
MethodCell aggregate_cell(const std::string& label,
                          const std::vector<std::optional<PairMetrics>>& per_pair,
                          const std::vector<std::optional<double>>& rho_ideal);

/// Full study cell. Work item (i, j) draws from SplitMix64::stream(seed,
/// i + 1, j + 1) in this order: the ideal response (see
/// generate_aligned_perceiver), then eta (gamma mode redraws until inside
/// (0, span / 4)), then the distortion knots. Target i draws from
/// stream(seed, i + 1, 0). Pairs run in config.jobs threads; every
/// aggregate folds in pair-index order, so the report is identical for any
/// job count.
SimulationReport run_simulation(const SimConfig& config);

/// Long-format CSV: cell,method,metric,mean,sd with one row per summary
/// metric plus mse / n_pairs / n_failed rows (sd empty). Doubles print with
/// 17 significant digits so equal reports are byte-equal.
std::string report_csv(const SimulationReport& report);

/// Same content as JSON, plus the configuration echo.
std::string report_json(const SimulationReport& report);

}  // namespace eawarp
