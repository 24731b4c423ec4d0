#include "eawarp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eawarp/numeric.hpp"

namespace eawarp {

SampledFunction kernel_smooth(const SampledFunction& f, double bandwidth) {
  if (!std::isfinite(bandwidth) || !(bandwidth > 0))
    throw std::invalid_argument("kernel_smooth: bandwidth must be positive");
  const int n = f.size();
  const auto& y = f.values();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double ti = f.grid().at(i);
    double sw = 0, swy = 0;
    for (int j = 0; j < n; ++j) {
      const double u = (ti - f.grid().at(j)) / bandwidth;
      const double w = std::exp(-0.5 * u * u);
      sw += w;
      swy += w * y[static_cast<size_t>(j)];
    }
    out[static_cast<size_t>(i)] = swy / sw;
  }
  return SampledFunction(f.grid(), std::move(out));
}

namespace {

// Pentadiagonal symmetric positive definite LDL^T, bands (a0, a1, a2) for
// the diagonal and the first two sub-diagonals. Factor once, solve many.
struct PentaLdlt {
  std::vector<double> d, e, f;  // D diagonal; L sub-diagonals 1 and 2

  PentaLdlt(int p, double a0, double a1, double a2)
      : d(static_cast<size_t>(p)), e(static_cast<size_t>(p), 0.0),
        f(static_cast<size_t>(p), 0.0) {
    for (int j = 0; j < p; ++j) {
      double fj = 0, ej = 0;
      if (j >= 2) fj = a2 / d[static_cast<size_t>(j - 2)];
      if (j >= 1) {
        double v = a1;
        if (j >= 2) v -= fj * d[static_cast<size_t>(j - 2)] * e[static_cast<size_t>(j - 1)];
        ej = v / d[static_cast<size_t>(j - 1)];
      }
      double dj = a0;
      if (j >= 2) dj -= fj * fj * d[static_cast<size_t>(j - 2)];
      if (j >= 1) dj -= ej * ej * d[static_cast<size_t>(j - 1)];
      if (!(dj > 0))
        throw std::runtime_error("spline_smooth: system lost definiteness");
      f[static_cast<size_t>(j)] = fj;
      e[static_cast<size_t>(j)] = ej;
      d[static_cast<size_t>(j)] = dj;
    }
  }

  void solve(std::vector<double>& z) const {
    const int p = static_cast<int>(d.size());
    for (int j = 1; j < p; ++j) {
      z[static_cast<size_t>(j)] -= e[static_cast<size_t>(j)] * z[static_cast<size_t>(j - 1)];
      if (j >= 2) z[static_cast<size_t>(j)] -= f[static_cast<size_t>(j)] * z[static_cast<size_t>(j - 2)];
    }
    for (int j = 0; j < p; ++j) z[static_cast<size_t>(j)] /= d[static_cast<size_t>(j)];
    for (int j = p - 2; j >= 0; --j) {
      z[static_cast<size_t>(j)] -= e[static_cast<size_t>(j + 1)] * z[static_cast<size_t>(j + 1)];
      if (j + 2 < p) z[static_cast<size_t>(j)] -= f[static_cast<size_t>(j + 2)] * z[static_cast<size_t>(j + 2)];
    }
  }
};

struct SplineCore {
  // Interior second-difference system of the natural smoothing spline on a
  // uniform grid: columns of Q carry (1, -2, 1) / h, R is the tridiagonal
  // overlap matrix (2h/3 diagonal, h/6 off). Solving
  // (R + lambda Q^T Q) gamma = Q^T y and setting g = y - lambda Q gamma
  // yields the spline values at the grid points.
  int n, p;
  double h;
  std::vector<double> qty;

  explicit SplineCore(const SampledFunction& fn)
      : n(fn.size()), p(fn.size() - 2), h(fn.grid().dt()),
        qty(static_cast<size_t>(fn.size() - 2)) {
    const auto& y = fn.values();
    for (int j = 0; j < p; ++j)
      qty[static_cast<size_t>(j)] =
          (y[static_cast<size_t>(j)] - 2.0 * y[static_cast<size_t>(j + 1)] +
           y[static_cast<size_t>(j + 2)]) / h;
  }

  // Fitted values and RSS at the given penalty; optionally the smoother
  // trace for GCV (costs p extra solves).
  struct Eval {
    std::vector<double> g;
    double rss = 0;
    double trace = 0;  // tr of the smoother matrix
  };

  Eval evaluate(const SampledFunction& fn, double lambda, bool want_trace) const {
    const auto& y = fn.values();
    Eval ev;
    if (lambda == 0.0) {  // interpolating spline: agrees with the data at knots
      ev.g = y;
      ev.rss = 0;
      ev.trace = static_cast<double>(n);
      return ev;
    }
    const double b0 = 6.0 / (h * h), b1 = -4.0 / (h * h), b2 = 1.0 / (h * h);
    PentaLdlt ldlt(p, 2.0 * h / 3.0 + lambda * b0, h / 6.0 + lambda * b1,
                   lambda * b2);
    std::vector<double> gamma = qty;
    ldlt.solve(gamma);
    ev.g = y;
    for (int i = 0; i < n; ++i) {
      double qg = 0;  // (Q gamma)_i, columns i-2 .. i clipped to range
      if (i < p) qg += gamma[static_cast<size_t>(i)];
      if (i - 1 >= 0 && i - 1 < p) qg -= 2.0 * gamma[static_cast<size_t>(i - 1)];
      if (i - 2 >= 0) qg += gamma[static_cast<size_t>(i - 2)];
      const double r = lambda * qg / h;
      ev.g[static_cast<size_t>(i)] -= r;
      ev.rss += r * r;
    }
    if (want_trace) {
      // tr(A) = n - lambda * tr(M^-1 B): one sparse column of B per solve.
      std::vector<double> z(static_cast<size_t>(p));
      double tb = 0;
      for (int j = 0; j < p; ++j) {
        std::fill(z.begin(), z.end(), 0.0);
        z[static_cast<size_t>(j)] = 1.0;
        ldlt.solve(z);
        double dot = b0 * z[static_cast<size_t>(j)];
        if (j >= 1) dot += b1 * z[static_cast<size_t>(j - 1)];
        if (j >= 2) dot += b2 * z[static_cast<size_t>(j - 2)];
        if (j + 1 < p) dot += b1 * z[static_cast<size_t>(j + 1)];
        if (j + 2 < p) dot += b2 * z[static_cast<size_t>(j + 2)];
        tb += dot;
      }
      ev.trace = static_cast<double>(n) - lambda * tb;
    }
    return ev;
  }
};

double gcv_from(const SplineCore::Eval& ev, int n) {
  const double denom = 1.0 - ev.trace / static_cast<double>(n);
  if (!(denom > 0)) return std::numeric_limits<double>::infinity();
  return (ev.rss / static_cast<double>(n)) / (denom * denom);
}

void check_spline_input(const SampledFunction& f) {
  if (f.size() < 4)
    throw std::invalid_argument("spline_smooth: needs at least 4 points");
}

}  // namespace

std::vector<double> spline_gcv_candidates(const SampledFunction& f) {
  check_spline_input(f);
  // tr(R) / tr(Q^T Q) = h^3 / 9 balances the two quadratic forms, centering
  // the sweep between the interpolation and straight-line regimes.
  const double h = f.grid().dt();
  const double scale = h * h * h / 9.0;
  std::vector<double> out;
  out.reserve(61);
  for (int i = 0; i <= 60; ++i)
    out.push_back(scale * std::pow(10.0, -8.0 + 12.0 * i / 60.0));
  return out;
}

SplineFit spline_smooth_fit(const SampledFunction& f, double lambda) {
  check_spline_input(f);
  SplineCore core(f);
  if (lambda >= 0) {
    auto ev = core.evaluate(f, lambda, true);
    return {SampledFunction(f.grid(), std::move(ev.g)), lambda,
            lambda == 0.0 ? std::numeric_limits<double>::infinity()
                          : gcv_from(ev, core.n),
            false};
  }
  const auto grid = spline_gcv_candidates(f);
  double best_gcv = std::numeric_limits<double>::infinity();
  double best_lambda = grid.front();
  for (double cand : grid) {
    const double s = gcv_from(core.evaluate(f, cand, true), core.n);
    if (s < best_gcv) {
      best_gcv = s;
      best_lambda = cand;
    }
  }
  auto ev = core.evaluate(f, best_lambda, false);
  return {SampledFunction(f.grid(), std::move(ev.g)), best_lambda, best_gcv,
          true};
}

SampledFunction spline_smooth(const SampledFunction& f, double lambda) {
  if (lambda < 0)
    throw std::invalid_argument("spline_smooth: lambda must be >= 0");
  return spline_smooth_fit(f, lambda).smoothed;
}

SampledFunction spline_smooth_gcv(const SampledFunction& f) {
  return spline_smooth_fit(f, -1.0).smoothed;
}

double spline_gcv_score(const SampledFunction& f, double lambda) {
  check_spline_input(f);
  if (lambda < 0)
    throw std::invalid_argument("spline_gcv_score: lambda must be >= 0");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  SplineCore core(f);
  return gcv_from(core.evaluate(f, lambda, true), core.n);
}

SampledFunction regrid(const SampledFunction& f, int n) {
  if (n == f.size()) return f;
  UniformGrid g(f.grid().t0(), f.grid().t1(), n);
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) out[static_cast<size_t>(m)] = f.eval(g.at(m));
  return SampledFunction(g, std::move(out));
}

PairFilterResult filter_negative_correlation(
    std::span<const SampledFunction> targets,
    std::span<const SampledFunction> perceivers, double threshold) {
  if (targets.size() != perceivers.size())
    throw std::invalid_argument(
        "filter_negative_correlation: input lengths differ");
  PairFilterResult res;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!(targets[i].grid() == perceivers[i].grid()))
      throw std::invalid_argument(
          "filter_negative_correlation: pair grids differ");
    const auto rho = pearson_raw(targets[i].values(), perceivers[i].values());
    if (!rho.has_value()) {
      res.dropped.push_back({i, 0.0, true});
    } else if (*rho < threshold) {
      res.dropped.push_back({i, *rho, false});
    } else {
      res.kept.push_back(i);
    }
  }
  return res;
}

}  // namespace eawarp
