#include "eawarp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "eawarp/io.hpp"
#include "eawarp/numeric.hpp"
#include "eawarp/preprocess.hpp"
#include "eawarp/version.hpp"

namespace eawarp {

namespace {

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

EtaDistribution EtaDistribution::gamma_dist(double shape, double scale) {
  EtaDistribution e;
  e.is_fixed = false;
  e.shape = shape;
  e.scale = scale;
  return e;
}

EtaDistribution EtaDistribution::fixed(double value) {
  EtaDistribution e;
  e.is_fixed = true;
  e.value = value;
  return e;
}

std::string EtaDistribution::label() const {
  if (is_fixed) return "fixed(" + num_label(value) + ")";
  return "gamma(" + num_label(shape) + "," + num_label(scale) + ")";
}

std::vector<AlignmentMethod> SimConfig::default_methods() const {
  const NormalizedBound bound = NormalizedBound::native(nu_align, domain_end);
  return {AlignmentMethod::srvf(bound, dp),
          AlignmentMethod::srvf(NormalizedBound::unbounded(), dp),
          AlignmentMethod::fixed_delay(bound), AlignmentMethod::identity()};
}

void SimConfig::validate() const {
  if (n_targets < 1 || n_perceivers < 1)
    throw std::invalid_argument("SimConfig: needs >= 1 target and perceiver");
  if (grid_points < 3)
    throw std::invalid_argument("SimConfig: needs >= 3 grid points");
  if (!(domain_end > 0) || !std::isfinite(domain_end))
    throw std::invalid_argument("SimConfig: domain_end must be positive");
  if (!(nu_align > 0) || !std::isfinite(nu_align))
    throw std::invalid_argument("SimConfig: nu_align must be positive");
  if (jobs < 1) throw std::invalid_argument("SimConfig: jobs must be >= 1");
  if (eta.is_fixed) {
    if (!(eta.value > 0) || !(eta.value < domain_end / 4))
      throw std::invalid_argument(
          "SimConfig: fixed eta must lie in (0, domain span / 4)");
  } else if (!(eta.shape > 0) || !(eta.scale > 0)) {
    throw std::invalid_argument("SimConfig: gamma eta needs positive shape/scale");
  }
  if (!dp.exhaustive && dp.window < 1)
    throw std::invalid_argument("SimConfig: window must be >= 1");
  if (dp.exhaustive && grid_points > 61)
    throw std::invalid_argument(
        "SimConfig: exhaustive search is limited to 61 grid points");
}

std::string SimConfig::cell_label() const {
  return eta.label() + "_nu" + num_label(nu_align);
}

std::vector<double> generate_base_series(int n, SplitMix64& rng) {
  std::vector<double> s(static_cast<size_t>(n));
  double acc = 0;
  for (int m = 0; m < n; ++m) {
    acc += rng.normal();
    s[static_cast<size_t>(m)] = acc;
  }
  return s;
}

SampledFunction generate_target(int grid_points, double domain_end,
                                SplitMix64& rng) {
  UniformGrid grid(0.0, domain_end, grid_points);
  SampledFunction raw(grid, generate_base_series(grid_points, rng));
  return kernel_smooth(raw, 10.0 * grid.dt());
}

SampledFunction compose_aligned_perceiver(const SampledFunction& x,
                                          double omega,
                                          const SampledFunction& eps1,
                                          const SampledFunction& eps2) {
  if (eps1.size() != x.size() || eps2.size() != x.size())
    throw std::invalid_argument("compose_aligned_perceiver: size mismatch");
  std::vector<double> v(static_cast<size_t>(x.size()));
  for (int m = 0; m < x.size(); ++m)
    v[static_cast<size_t>(m)] =
        (1.0 - omega) * eps1[m] * x[m] + omega * eps2[m];
  return SampledFunction(x.grid(), std::move(v));
}

SampledFunction generate_aligned_perceiver(const SampledFunction& x,
                                           SplitMix64& rng) {
  const int n = x.size();
  const double dt = x.grid().dt();
  const double omega = rng.uniform(0.5, 1.0);
  // Standard Brownian motion on the unit clock (variance 1 at the right
  // endpoint), offset to start at 1: a mild multiplicative envelope, not a
  // walk at the series' own scale.
  const double step_sd = std::sqrt(1.0 / static_cast<double>(n - 1));
  std::vector<double> walk(static_cast<size_t>(n));
  walk[0] = 1.0;
  for (int m = 1; m < n; ++m)
    walk[static_cast<size_t>(m)] =
        walk[static_cast<size_t>(m - 1)] + step_sd * rng.normal();
  SampledFunction eps1 =
      kernel_smooth(SampledFunction(x.grid(), std::move(walk)), 40.0 * dt);
  SampledFunction eps2 = kernel_smooth(
      SampledFunction(x.grid(), generate_base_series(n, rng)), 20.0 * dt);
  return compose_aligned_perceiver(x, omega, eps1, eps2);
}

WarpingFunction generate_warping(double eta, const UniformGrid& grid,
                                 SplitMix64& rng) {
  const double span = grid.span();
  if (!(eta > 0) || !(eta < span / 4))
    throw std::invalid_argument(
        "generate_warping: eta must lie in (0, span / 4)");
  const double step = grid.dt();
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
  bool found = false;
  for (int tries = 0; tries < 1000000 && !found; ++tries) {
    double k[4];
    for (double& v : k) v = rng.uniform(0.0, span);
    std::sort(k, k + 4);
    t1 = k[0];
    t2 = k[1];
    t3 = k[2];
    t4 = k[3];
    found = t1 > 0 && t4 < span && t2 - t1 >= 2.0 * step &&
            t4 - t3 >= 2.0 * step && t3 - t2 > 2.0 * eta;
  }
  if (!found)
    throw std::runtime_error("generate_warping: knot sampling did not settle");

  const double mid_slope = 1.0 - 2.0 * eta / (t3 - t2);
  std::vector<double> v(static_cast<size_t>(grid.n()));
  for (int m = 0; m < grid.n(); ++m) {
    const double tau = grid.at(m) - grid.t0();
    double psi;
    if (tau <= t1) {
      psi = tau * (t1 + eta) / t1;
    } else if (tau <= t2) {
      psi = tau + eta;
    } else if (tau <= t3) {
      psi = t2 + eta + (tau - t2) * mid_slope;
    } else if (tau <= t4) {
      psi = tau - eta;
    } else {
      psi = t4 - eta + (tau - t4) * (span - (t4 - eta)) / (span - t4);
    }
    v[static_cast<size_t>(m)] = psi / span;
  }
  return WarpingFunction::from_samples(UniformGrid::unit(grid.n()),
                                       std::move(v));
}

namespace {

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary s;
  if (xs.empty()) return s;
  double acc = 0;
  for (double v : xs) acc += v;
  s.mean = acc / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double v : xs) {
      const double d = v - s.mean;
      ss += d * d;
    }
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

MethodCell aggregate_cell(
    const std::string& label,
    const std::vector<std::optional<PairMetrics>>& per_pair,
    const std::vector<std::optional<double>>& rho_ideal) {
  if (per_pair.size() != rho_ideal.size())
    throw std::invalid_argument("aggregate_cell: input lengths differ");
  MethodCell cell;
  cell.method = label;
  std::vector<double> rho_a, rho_x, d_gamma, d_q_a, d_q_x, rho_gap, dq_gap,
      warp_amount, phase_dist, sq;
  for (std::size_t p = 0; p < per_pair.size(); ++p) {
    if (!per_pair[p].has_value()) {
      ++cell.n_failed;
      continue;
    }
    const PairMetrics& pm = *per_pair[p];
    ++cell.n_pairs;
    rho_a.push_back(pm.rho_a);
    rho_x.push_back(pm.rho_x);
    d_gamma.push_back(pm.d_gamma);
    d_q_a.push_back(pm.d_q_a);
    d_q_x.push_back(pm.d_q_x);
    rho_gap.push_back(pm.rho_gap);
    dq_gap.push_back(pm.dq_gap);
    warp_amount.push_back(pm.warp_amount);
    phase_dist.push_back(pm.phase_dist);
    if (rho_ideal[p].has_value()) {
      const double d = *rho_ideal[p] - pm.rho_x;
      sq.push_back(d * d);
    }
  }
  cell.rho_a = summarize(rho_a);
  cell.rho_x = summarize(rho_x);
  cell.d_gamma = summarize(d_gamma);
  cell.d_q_a = summarize(d_q_a);
  cell.d_q_x = summarize(d_q_x);
  cell.rho_gap = summarize(rho_gap);
  cell.dq_gap = summarize(dq_gap);
  cell.warp_amount = summarize(warp_amount);
  cell.phase_dist = summarize(phase_dist);
  cell.mse = summarize(sq).mean;
  return cell;
}

SimulationReport run_simulation(const SimConfig& config) {
  config.validate();
  const std::vector<AlignmentMethod> methods =
      config.methods.empty() ? config.default_methods() : config.methods;
  const UniformGrid grid(0.0, config.domain_end, config.grid_points);
  const int I = config.n_targets, J = config.n_perceivers;
  const int P = I * J;

  std::vector<SampledFunction> targets;
  targets.reserve(static_cast<size_t>(I));
  for (int i = 0; i < I; ++i) {
    SplitMix64 rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(i) + 1, 0);
    targets.push_back(generate_target(config.grid_points, config.domain_end, rng));
  }

  std::vector<std::vector<std::optional<PairMetrics>>> per_method(
      methods.size(), std::vector<std::optional<PairMetrics>>(static_cast<size_t>(P)));
  std::vector<std::optional<double>> rho_ideal(static_cast<size_t>(P));

  auto run_pair = [&](int p) {
    const int i = p / J, j = p % J;
    SplitMix64 rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(i) + 1,
                                        static_cast<std::uint64_t>(j) + 1);
    const SampledFunction& x = targets[static_cast<size_t>(i)];
    try {
      const SampledFunction a = generate_aligned_perceiver(x, rng);
      double eta = config.eta.value;
      if (!config.eta.is_fixed) {
        int tries = 0;
        do {
          eta = rng.gamma(config.eta.shape, config.eta.scale);
          if (++tries > 1000000)
            throw std::runtime_error("eta truncation did not settle");
        } while (!(eta > 0 && eta < config.domain_end / 4));
      }
      const WarpingFunction psi = generate_warping(eta, grid, rng);
      const WarpingFunction gamma_true = invert_warping(psi);
      const SampledFunction y_unit = apply_warping(rescale_to_unit(a).fn, psi);
      const SampledFunction y(grid, y_unit.values());
      const auto ideal = pearson_raw(x.values(), a.values());
      if (ideal.has_value()) rho_ideal[static_cast<size_t>(p)] = *ideal;
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        try {
          const AlignmentResult r = align(x, y, methods[mi]);
          per_method[mi][static_cast<size_t>(p)] = evaluate_pair(x, a, gamma_true, r);
        } catch (...) {
          // recorded through the failure count; other methods still run
        }
      }
    } catch (...) {
      // pair generation failed; every method records the failure
    }
  };

  const int jobs = std::min(config.jobs, P);
  if (jobs <= 1) {
    for (int p = 0; p < P; ++p) run_pair(p);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (int p = next.fetch_add(1); p < P; p = next.fetch_add(1))
          run_pair(p);
      });
    for (auto& th : pool) th.join();
  }

  SimulationReport report;
  report.config = config;
  report.config.methods = methods;
  report.cell = config.cell_label();
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    report.methods.push_back(
        aggregate_cell(methods[mi].label(), per_method[mi], rho_ideal));
  return report;
}

std::string report_csv(const SimulationReport& report) {
  std::string out = "cell,method,metric,mean,sd\n";
  auto row = [&](const std::string& method, const char* metric,
                 const std::string& mean, const std::string& sd) {
    out += report.cell + "," + method + "," + metric + "," + mean + "," + sd + "\n";
  };
  for (const MethodCell& c : report.methods) {
    auto summary = [&](const char* name, const MetricSummary& s) {
      row(c.method, name, format_g17(s.mean), format_g17(s.sd));
    };
    summary("rho_a", c.rho_a);
    summary("rho_x", c.rho_x);
    summary("d_gamma", c.d_gamma);
    summary("d_q_a", c.d_q_a);
    summary("d_q_x", c.d_q_x);
    summary("rho_gap", c.rho_gap);
    summary("dq_gap", c.dq_gap);
    summary("warp_amount", c.warp_amount);
    summary("phase_dist", c.phase_dist);
    row(c.method, "mse", format_g17(c.mse), "");
    row(c.method, "n_pairs", std::to_string(c.n_pairs), "");
    row(c.method, "n_failed", std::to_string(c.n_failed), "");
  }
  return out;
}

std::string report_json(const SimulationReport& report) {
  nlohmann::json j;
  j["kind"] = "simulation_report";
  j["schema_version"] = 1;
  j["version"] = kVersionString;
  j["conventions"] = nlohmann::json::array();
  for (const char* c : kConventions) j["conventions"].push_back(c);

  nlohmann::json cfg;
  cfg["n_targets"] = report.config.n_targets;
  cfg["n_perceivers"] = report.config.n_perceivers;
  cfg["grid_points"] = report.config.grid_points;
  cfg["domain_end"] = report.config.domain_end;
  cfg["nu_align"] = report.config.nu_align;
  cfg["seed"] = report.config.seed;
  cfg["jobs"] = report.config.jobs;
  cfg["eta"] = report.config.eta.label();
  cfg["search"] = report.config.dp.exhaustive
                      ? std::string("exhaustive")
                      : "window=" + std::to_string(report.config.dp.window);
  cfg["methods"] = nlohmann::json::array();
  for (const auto& m : report.config.methods)
    cfg["methods"].push_back(m.label());
  j["config"] = cfg;
  j["cell"] = report.cell;

  j["methods"] = nlohmann::json::array();
  for (const MethodCell& c : report.methods) {
    nlohmann::json m;
    m["method"] = c.method;
    m["n_pairs"] = c.n_pairs;
    m["n_failed"] = c.n_failed;
    m["mse"] = c.mse;
    nlohmann::json metrics;
    auto put = [&](const char* name, const MetricSummary& s) {
      metrics[name] = {{"mean", s.mean}, {"sd", s.sd}};
    };
    put("rho_a", c.rho_a);
    put("rho_x", c.rho_x);
    put("d_gamma", c.d_gamma);
    put("d_q_a", c.d_q_a);
    put("d_q_x", c.d_q_x);
    put("rho_gap", c.rho_gap);
    put("dq_gap", c.dq_gap);
    put("warp_amount", c.warp_amount);
    put("phase_dist", c.phase_dist);
    m["metrics"] = metrics;
    j["methods"].push_back(m);
  }
  return j.dump(2) + "\n";
}

}  // namespace eawarp
