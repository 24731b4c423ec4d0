#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eawarp/grid.hpp"
#include "eawarp/warping.hpp"
#include "helpers.hpp"

using namespace eawarp;

TEST_CASE("UniformGrid validates and exposes exact endpoints") {
  CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(UniformGrid(1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(UniformGrid(2.0, 1.0, 10), std::invalid_argument);

  UniformGrid g(0.0, 299.0, 300);
  CHECK(g.at(0) == 0.0);
  CHECK(g.at(299) == 299.0);
  CHECK(g.dt() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.span() == 299.0);
  CHECK_FALSE(g.is_unit());
  CHECK(UniformGrid::unit(17).is_unit());
}

TEST_CASE("SampledFunction validates values and evaluates exactly at nodes") {
  UniformGrid g(0.0, 2.0, 5);
  CHECK_THROWS_AS(SampledFunction(g, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledFunction(g, {1, 2, std::nan(""), 4, 5}),
                  std::invalid_argument);

  SampledFunction f(g, {3.0, 1.0, 4.0, 1.0, 5.0});
  for (int m = 0; m < 5; ++m) CHECK(f.eval(g.at(m)) == f[m]);
  CHECK(f.eval(0.25) == doctest::Approx(2.0));   // halfway 3 -> 1
  CHECK(f.eval(-10.0) == 3.0);                   // clamped
  CHECK(f.eval(10.0) == 5.0);
}

TEST_CASE("rescale_to_unit relabels the grid and keeps values bitwise") {
  UniformGrid g(5.0, 35.0, 61);
  SplitMix64 rng(7);
  SampledFunction f = testutil::smooth_function(rng, g);
  UnitRescale r = rescale_to_unit(f);
  CHECK(r.fn.grid().is_unit());
  CHECK(r.fn.grid().n() == 61);
  CHECK(r.native == g);
  CHECK(r.fn.values() == f.values());

  UnitRescale again = rescale_to_unit(r.fn);
  CHECK(again.fn.values() == f.values());
  CHECK(again.native.is_unit());

  // Evaluation commutes with the domain map.
  for (double t : {5.0, 12.3, 20.0, 34.9}) {
    const double tau = (t - 5.0) / 30.0;
    CHECK(r.fn.eval(tau) == doctest::Approx(f.eval(t)).epsilon(1e-12));
  }
}

TEST_CASE("WarpingFunction enforces the boundary and monotone invariants") {
  const UniformGrid u = UniformGrid::unit(5);
  CHECK_THROWS_AS(WarpingFunction(u, {0.1, 0.2, 0.5, 0.7, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WarpingFunction(u, {0.0, 0.5, 0.4, 0.7, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WarpingFunction(u, {0.0, 0.2, 0.5, 0.7, 0.9}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WarpingFunction(UniformGrid(0, 2, 5), {0, .2, .5, .7, 1}),
                  std::invalid_argument);
  CHECK_NOTHROW(WarpingFunction(u, {0.0, 0.2, 0.2, 0.7, 1.0}));  // flats allowed

  WarpingFunction id = WarpingFunction::identity(300);
  for (int m = 0; m < 300; ++m) CHECK(id[m] == id.grid().at(m));
}

TEST_CASE("from_samples flattens rounding noise but rejects real decreases") {
  const UniformGrid u = UniformGrid::unit(4);
  WarpingFunction g = WarpingFunction::from_samples(
      u, {1e-17, 0.5, 0.5 - 1e-12, 1.0 + 1e-15});
  CHECK(g[0] == 0.0);
  CHECK(g[2] == 0.5);  // flattened up to the previous value
  CHECK(g[3] == 1.0);
  CHECK_THROWS_AS(
      WarpingFunction::from_samples(u, {0.0, 0.5, 0.4, 1.0}),
      std::invalid_argument);
}

TEST_CASE("apply_warping with the identity is exact on values") {
  SplitMix64 rng(11);
  SampledFunction f = testutil::smooth_function(rng, UniformGrid::unit(300));
  SampledFunction out = apply_warping(f, WarpingFunction::identity(300));
  CHECK(out.values() == f.values());
}

TEST_CASE("apply_warping reproduces an analytic composition") {
  // f(s) = s^2 warped by g(t) = sqrt(t) is the identity map; node values of
  // g are exact, so the only error is the interpolation of f (O(dt^2)).
  const int n = 200;
  const UniformGrid u = UniformGrid::unit(n);
  std::vector<double> fv(n), gv(n);
  for (int m = 0; m < n; ++m) {
    fv[static_cast<size_t>(m)] = u.at(m) * u.at(m);
    gv[static_cast<size_t>(m)] = std::sqrt(u.at(m));
  }
  SampledFunction f(u, fv);
  WarpingFunction g = WarpingFunction::from_samples(u, gv);
  SampledFunction out = apply_warping(f, g);
  const double dt = u.dt();
  for (int m = 0; m < n; ++m)
    CHECK(std::abs(out[m] - u.at(m)) <= 2.0 * dt * dt);
}

TEST_CASE("warping round-trip error stays under the documented bound") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 150;
    const UniformGrid u = UniformGrid::unit(n);
    SampledFunction f = testutil::smooth_function(rng, u);
    WarpingFunction g = testutil::random_warping(rng, n);

    double max_slope = 0, min_slope = 1e300, lip = 0;
    for (int m = 1; m < n; ++m) {
      const double sg = (g[m] - g[m - 1]) / u.dt();
      max_slope = std::max(max_slope, sg);
      min_slope = std::min(min_slope, sg);
      lip = std::max(lip, std::abs(f[m] - f[m - 1]) / u.dt());
    }
    const double C = max_slope / min_slope + 1.0;

    SampledFunction fw = apply_warping(f, g);
    SampledFunction back = apply_warping(fw, invert_warping(g));
    const double err = testutil::max_abs_diff(back.values(), f.values());
    CHECK(err <= C * u.dt() * lip);
  }
}

TEST_CASE("invert_warping of the identity is the identity, exactly") {
  WarpingFunction id = WarpingFunction::identity(257);
  WarpingFunction inv = invert_warping(id);
  CHECK(inv.values() == id.values());
}

TEST_CASE("invert_warping is an involution up to grid tolerance") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 120;
    WarpingFunction g = testutil::random_warping(rng, n);
    WarpingFunction gg = invert_warping(invert_warping(g));
    double max_slope = 0, min_slope = 1e300;
    for (int m = 1; m < n; ++m) {
      const double sg = (g[m] - g[m - 1]) * static_cast<double>(n - 1);
      max_slope = std::max(max_slope, sg);
      min_slope = std::min(min_slope, sg);
    }
    const double bound = (max_slope / min_slope + 1.0) / (n - 1.0);
    CHECK(testutil::max_abs_diff(gg.values(), g.values()) <= bound);
  }
}

TEST_CASE("invert_warping maps flat runs to their left endpoint") {
  const UniformGrid u = UniformGrid::unit(7);
  WarpingFunction g(u, {0.0, 0.2, 0.5, 0.5, 0.5, 0.8, 1.0});
  WarpingFunction inv = invert_warping(g);
  // The preimage of 0.5 is the run [2/6, 4/6]; the inverse picks 2/6.
  CHECK(inv.eval(0.5) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  for (int m = 1; m < 7; ++m) CHECK(inv[m] >= inv[m - 1]);
  // g(inv(u)) recovers u wherever the sampled inverse is interpolated
  // inside one linear piece of the true inverse (cells that straddle a kink
  // of g^-1 carry irreducible interpolation error on a 7-point grid).
  for (double uu : {0.1, 0.4, 0.45, 0.9})
    CHECK(g.eval(inv.eval(uu)) == doctest::Approx(uu).epsilon(1e-9));
}

TEST_CASE("compose_warpings with identity is a no-op") {
  SplitMix64 rng(41);
  WarpingFunction g = testutil::random_warping(rng, 90);
  WarpingFunction id = WarpingFunction::identity(90);
  CHECK(compose_warpings(g, id).values() == g.values());  // g evaluated at nodes
  WarpingFunction idg = compose_warpings(id, g);
  CHECK(testutil::max_abs_diff(idg.values(), g.values()) <= 1e-15);
}

TEST_CASE("compose_warpings(invert(g), g) is the identity within tolerance") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 140;
    WarpingFunction g = testutil::random_warping(rng, n);
    WarpingFunction round = compose_warpings(invert_warping(g), g);
    WarpingFunction id = WarpingFunction::identity(n);
    double max_slope = 0, min_slope = 1e300;
    for (int m = 1; m < n; ++m) {
      const double sg = (g[m] - g[m - 1]) * static_cast<double>(n - 1);
      max_slope = std::max(max_slope, sg);
      min_slope = std::min(min_slope, sg);
    }
    const double bound = (max_slope / min_slope + 1.0) / (n - 1.0);
    CHECK(testutil::max_abs_diff(round.values(), id.values()) <= bound);
  }
}

TEST_CASE("NormalizedBound carries native and normalized forms") {
  NormalizedBound b = NormalizedBound::native(30.0, 299.0);
  CHECK(b.bounded());
  CHECK(b.nu_native() == 30.0);
  CHECK(b.nu_norm() == doctest::Approx(30.0 / 299.0).epsilon(1e-15));

  NormalizedBound u = NormalizedBound::unbounded();
  CHECK_FALSE(u.bounded());
  CHECK(std::isinf(u.nu_norm()));
  CHECK(0.5 <= u.nu_norm());  // usable directly in feasibility tests

  CHECK_THROWS_AS(NormalizedBound::native(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NormalizedBound::native(-2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NormalizedBound::native(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sup_deviation: zero at identity, exact on a shift, matches dense scan") {
  CHECK(sup_deviation(WarpingFunction::identity(100), 299.0) == 0.0);

  const int n = 100;
  const UniformGrid u = UniformGrid::unit(n);
  std::vector<double> v(static_cast<size_t>(n));
  v[0] = 0.0;
  for (int m = 1; m < n; ++m) v[static_cast<size_t>(m)] = std::min(u.at(m) + 0.1, 1.0);
  WarpingFunction g(u, v);
  CHECK(sup_deviation(g, 299.0) == doctest::Approx(0.1 * 299.0).epsilon(1e-12));

  // Piecewise-linear deviation attains its maximum at a node: a 10x denser
  // scan finds nothing larger.
  SplitMix64 rng(53);
  WarpingFunction w = testutil::random_warping(rng, 80);
  const double node_max = sup_deviation(w, 1.0);
  double dense_max = 0;
  for (int i = 0; i <= 790; ++i) {
    const double t = static_cast<double>(i) / 790.0;
    dense_max = std::max(dense_max, std::abs(w.eval(t) - t));
  }
  CHECK(dense_max <= node_max + 1e-12);
}
