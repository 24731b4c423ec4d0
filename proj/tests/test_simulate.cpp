#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "eawarp/metrics.hpp"
#include "eawarp/preprocess.hpp"
#include "eawarp/rng.hpp"
#include "eawarp/simulate.hpp"
#include "helpers.hpp"

using namespace eawarp;

TEST_CASE("rng: normal consumes exactly two uniforms, stable moments") {
  SplitMix64 a(42), b(42);
  (void)a.normal();
  (void)b.next_unit();
  (void)b.next_unit();
  CHECK(a.next_u64() == b.next_u64());  // streams stay in lock step

  SplitMix64 rng(4242);
  const int n = 20000;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    acc += z;
    acc2 += z * z;
  }
  const double mean = acc / n;
  const double sd = std::sqrt((acc2 - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean) < 0.02);
  CHECK(sd == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rng: gamma sample means match shape * scale") {
  struct Case {
    double shape, scale;
  };
  for (const Case c : {Case{60.0, 0.5}, Case{30.0, 1.0}, Case{15.0, 2.0}}) {
    SplitMix64 rng(static_cast<std::uint64_t>(c.shape * 1000 + c.scale * 10));
    const int n = 20000;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += rng.gamma(c.shape, c.scale);
    CHECK(acc / n == doctest::Approx(c.shape * c.scale).epsilon(0.015));
  }
  // Shape below one exercises the boost path.
  SplitMix64 rng(99);
  double acc = 0;
  for (int i = 0; i < 20000; ++i) acc += rng.gamma(0.5, 2.0);
  CHECK(acc / 20000 == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(rng.gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.gamma(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("rng: derived streams differ and are reproducible") {
  SplitMix64 a = SplitMix64::stream(1, 2, 3);
  SplitMix64 b = SplitMix64::stream(1, 2, 3);
  SplitMix64 c = SplitMix64::stream(1, 3, 2);
  CHECK(a.next_u64() == b.next_u64());
  SplitMix64 a2 = SplitMix64::stream(1, 2, 3);
  CHECK(a2.next_u64() != c.next_u64());
}

TEST_CASE("base series is the running sum of its own draws") {
  SplitMix64 rng(51), probe(51);
  const auto s = generate_base_series(100, rng);
  REQUIRE(s.size() == 100);
  double acc = 0;
  for (int m = 0; m < 100; ++m) {
    acc += probe.normal();
    CHECK(s[static_cast<size_t>(m)] == acc);
  }
  // Exactly 100 normals were consumed.
  CHECK(rng.next_u64() == probe.next_u64());
}

TEST_CASE("target generation is smoothing of the base walk, nothing more") {
  SplitMix64 rng(53), probe(53);
  SampledFunction x = generate_target(120, 119.0, rng);
  const UniformGrid grid(0.0, 119.0, 120);
  SampledFunction expect = kernel_smooth(
      SampledFunction(grid, generate_base_series(120, probe)),
      10.0 * grid.dt());
  CHECK(x.grid() == grid);
  CHECK(x.values() == expect.values());
  CHECK(rng.next_u64() == probe.next_u64());
}

TEST_CASE("compose_aligned_perceiver arithmetic hooks") {
  SplitMix64 rng(57);
  const UniformGrid g(0.0, 49.0, 50);
  SampledFunction x = testutil::smooth_function(rng, g);
  SampledFunction ones(g, std::vector<double>(50, 1.0));
  SampledFunction zeros(g, std::vector<double>(50, 0.0));
  SampledFunction noise = testutil::smooth_function(rng, g);

  // omega = 1 wipes the target factor entirely.
  SampledFunction a1 = compose_aligned_perceiver(x, 1.0, noise, noise);
  for (int m = 0; m < 50; ++m) CHECK(a1[m] == noise[m]);

  // omega = 1/2 with unit gain and no additive part halves the target.
  SampledFunction a2 = compose_aligned_perceiver(x, 0.5, ones, zeros);
  for (int m = 0; m < 50; ++m)
    CHECK(a2[m] == doctest::Approx(0.5 * x[m]).epsilon(1e-15));

  SampledFunction shorter(UniformGrid(0.0, 9.0, 10), std::vector<double>(10, 1.0));
  CHECK_THROWS_AS(compose_aligned_perceiver(x, 0.5, shorter, zeros),
                  std::invalid_argument);
}

TEST_CASE("aligned perceiver follows the documented draw order exactly") {
  SplitMix64 rng(61), probe(61);
  const UniformGrid g(0.0, 99.0, 100);
  SampledFunction x = testutil::smooth_function(rng, g);

  SplitMix64 gen_rng(777), manual(777);
  SampledFunction a = generate_aligned_perceiver(x, gen_rng);

  const double omega = manual.uniform(0.5, 1.0);
  std::vector<double> walk(100);
  walk[0] = 1.0;
  const double step_sd = std::sqrt(1.0 / 99.0);
  for (int m = 1; m < 100; ++m)
    walk[static_cast<size_t>(m)] =
        walk[static_cast<size_t>(m - 1)] + step_sd * manual.normal();
  SampledFunction eps1 =
      kernel_smooth(SampledFunction(g, std::move(walk)), 40.0 * g.dt());
  SampledFunction eps2 = kernel_smooth(
      SampledFunction(g, generate_base_series(100, manual)), 20.0 * g.dt());
  SampledFunction expect = compose_aligned_perceiver(x, omega, eps1, eps2);
  CHECK(a.values() == expect.values());
  CHECK(gen_rng.next_u64() == manual.next_u64());
  CHECK(omega >= 0.5);
  CHECK(omega < 1.0);

  // The mixing weight concentrates on [0.5, 1) with mean 3/4.
  SplitMix64 wrng(63);
  double acc = 0;
  for (int i = 0; i < 10000; ++i) acc += wrng.uniform(0.5, 1.0);
  CHECK(acc / 10000 == doctest::Approx(0.75).epsilon(0.015));
}

TEST_CASE("generated distortions plateau at exactly +/- eta") {
  const UniformGrid grid(0.0, 299.0, 300);
  const double span = grid.span();
  SplitMix64 rng(67);
  for (const double eta : {5.0, 20.0, 40.0}) {
    for (int rep = 0; rep < 20; ++rep) {
      WarpingFunction psi = generate_warping(eta, grid, rng);
      REQUIRE(psi.size() == 300);
      CHECK(psi.values().front() == 0.0);
      CHECK(psi.values().back() == 1.0);
      // Strictly increasing: the middle slope stays positive by construction.
      for (int m = 1; m < 300; ++m)
        CHECK(psi.values()[static_cast<size_t>(m)] >
              psi.values()[static_cast<size_t>(m - 1)]);
      // Node deviations in native units: the extremes are exactly +/- eta.
      double dmax = -1e300, dmin = 1e300;
      for (int m = 0; m < 300; ++m) {
        const double dev =
            (psi.values()[static_cast<size_t>(m)] - grid.at(m) / span) * span;
        dmax = std::max(dmax, dev);
        dmin = std::min(dmin, dev);
      }
      CHECK(dmax == doctest::Approx(eta).epsilon(1e-9));
      CHECK(dmin == doctest::Approx(-eta).epsilon(1e-9));
      CHECK(sup_deviation(psi, span) == doctest::Approx(eta).epsilon(1e-9));
      // Each plateau holds the extreme for at least two consecutive nodes.
      int hi = 0, lo = 0;
      for (int m = 0; m < 300; ++m) {
        const double dev =
            (psi.values()[static_cast<size_t>(m)] - grid.at(m) / span) * span;
        if (std::abs(dev - eta) <= 1e-6 * eta) ++hi;
        if (std::abs(dev + eta) <= 1e-6 * eta) ++lo;
      }
      CHECK(hi >= 2);
      CHECK(lo >= 2);
    }
  }
  CHECK_THROWS_AS(generate_warping(span / 4, grid, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_warping(0.0, grid, rng), std::invalid_argument);
}

TEST_CASE("distortion deviation profile is rise / hold / fall / hold / rise") {
  const UniformGrid grid(0.0, 299.0, 300);
  SplitMix64 rng(71);
  WarpingFunction psi = generate_warping(25.0, grid, rng);
  const double span = grid.span();
  std::vector<double> dev(300);
  for (int m = 0; m < 300; ++m)
    dev[static_cast<size_t>(m)] =
        (psi.values()[static_cast<size_t>(m)] - grid.at(m) / span) * span;
  // Sign changes of the node-to-node deviation increments: up, 0, down, 0, up
  // collapses to at most two strict direction reversals.
  int reversals = 0;
  int last_sign = 0;
  for (int m = 1; m < 300; ++m) {
    const double d = dev[static_cast<size_t>(m)] - dev[static_cast<size_t>(m - 1)];
    const int sign = d > 1e-9 ? 1 : (d < -1e-9 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++reversals;
      last_sign = sign;
    }
  }
  CHECK(reversals == 2);
}

TEST_CASE("inverting the planted distortion recovers the ideal response") {
  SplitMix64 rng(73);
  const UniformGrid grid(0.0, 199.0, 200);
  SampledFunction x = generate_target(200, 199.0, rng);
  SampledFunction a = generate_aligned_perceiver(x, rng);
  WarpingFunction psi = generate_warping(15.0, grid, rng);
  SampledFunction au = rescale_to_unit(a).fn;
  SampledFunction y = apply_warping(au, psi);
  SampledFunction back = apply_warping(y, invert_warping(psi));
  CHECK(pearson(au, back) >= 0.999);
}

TEST_CASE("aggregate_cell on a hand-built degenerate batch") {
  SplitMix64 rng(79);
  const UniformGrid g(0.0, 99.0, 100);
  std::vector<std::optional<PairMetrics>> per_pair;
  std::vector<std::optional<double>> rho_ideal;
  for (int i = 0; i < 3; ++i) {
    SampledFunction x = testutil::smooth_function(rng, g);
    AlignmentResult r =
        align_srvf(x, x, NormalizedBound::native(10.0, g.span()), {});
    per_pair.push_back(evaluate_pair(x, x, WarpingFunction::identity(100), r));
    rho_ideal.push_back(1.0);
  }
  per_pair.push_back(std::nullopt);  // one failed pair
  rho_ideal.push_back(std::nullopt);
  MethodCell cell = aggregate_cell("penalized_srvf", per_pair, rho_ideal);
  CHECK(cell.method == "penalized_srvf");
  CHECK(cell.n_pairs == 3);
  CHECK(cell.n_failed == 1);
  CHECK(cell.rho_a.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cell.rho_a.sd <= 1e-12);
  CHECK(cell.d_gamma.mean == 0.0);
  CHECK(cell.d_gamma.sd == 0.0);
  CHECK(cell.warp_amount.mean == 0.0);
  CHECK(cell.phase_dist.mean == 0.0);
  CHECK(cell.mse <= 1e-24);
}

TEST_CASE("run_simulation: tiny cell is deterministic across thread counts") {
  SimConfig cfg;
  cfg.n_targets = 2;
  cfg.n_perceivers = 2;
  cfg.grid_points = 60;
  cfg.domain_end = 59.0;
  cfg.eta = EtaDistribution::fixed(5.0);
  cfg.nu_align = 6.0;
  cfg.seed = 7;
  cfg.jobs = 1;
  SimulationReport r1 = run_simulation(cfg);
  SimulationReport r1b = run_simulation(cfg);
  cfg.jobs = 3;
  SimulationReport r3 = run_simulation(cfg);

  // Re-running the same configuration is byte-identical.
  CHECK(report_json(r1) == report_json(r1b));
  CHECK(report_csv(r1) == report_csv(r1b));

  // Thread count never changes the numbers. The configuration echo records
  // the job count, which legitimately differs; normalize it before comparing.
  std::string j1 = report_json(r1), j3 = report_json(r3);
  const std::string k3 = "\"jobs\": 3";
  const auto p3 = j3.find(k3);
  REQUIRE(p3 != std::string::npos);
  j3.replace(p3, k3.size(), "\"jobs\": 1");
  CHECK(j1 == j3);
  CHECK(report_csv(r1) == report_csv(r3));  // the CSV carries no config echo
}

TEST_CASE("simulation report structure and labels") {
  SimConfig cfg;
  cfg.n_targets = 1;
  cfg.n_perceivers = 2;
  cfg.grid_points = 50;
  cfg.domain_end = 49.0;
  cfg.eta = EtaDistribution::fixed(4.0);
  cfg.nu_align = 5.0;
  cfg.seed = 11;
  SimulationReport r = run_simulation(cfg);
  CHECK(r.cell == "fixed(4)_nu5");
  REQUIRE(r.methods.size() == 4);
  CHECK(r.methods[0].method == "penalized_srvf");
  CHECK(r.methods[1].method == "unpenalized_srvf");
  CHECK(r.methods[2].method == "fixed_delay");
  CHECK(r.methods[3].method == "no_alignment");
  for (const MethodCell& c : r.methods) {
    CHECK(c.n_pairs == 2);
    CHECK(c.n_failed == 0);
    CHECK(c.rho_a.mean <= 1.0 + 1e-12);
    CHECK(c.rho_a.mean >= -1.0 - 1e-12);
  }
  // The no-alignment arm never warps: zero phase distance / warp amount.
  CHECK(r.methods[3].warp_amount.mean == 0.0);
  CHECK(r.methods[3].phase_dist.mean == 0.0);
  // CSV: header plus 12 rows per method.
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("cell,method,metric,mean,sd\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 12);
  const std::string json = report_json(r);
  CHECK(json.find("\"kind\": \"simulation_report\"") != std::string::npos);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("simulation config validation") {
  SimConfig cfg;
  cfg.jobs = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.jobs = 1;
  cfg.eta = EtaDistribution::fixed(100.0);  // >= span / 4 of the default grid
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.eta = EtaDistribution::gamma_dist(30.0, 1.0);
  cfg.dp = DpMode::exhaustive_mode();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // 300 > 61 points
  cfg.grid_points = 50;
  cfg.domain_end = 49.0;
  CHECK_NOTHROW(cfg.validate());
}
