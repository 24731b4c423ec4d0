#include "eawarp/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eawarp/numeric.hpp"
#include "eawarp/srvf.hpp"

namespace eawarp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-stimulus sufficient statistics: with Z_j = [1, x_j] the rank-2
// covariance update makes every likelihood term a function of these sums.
struct StimStats {
  double T, Sx, Sxx, Sy, Sxy, Syy;
};

struct PerStim {
  double w0, w1;    // Z' V^-1 y
  double f00, f01, f11;  // Z' V^-1 Z
};

struct Eval {
  double neg2ll = kInf;
  double beta0 = 0, beta1 = 0;
  bool ok = false;
};

std::vector<StimStats> collect_stats(const MixedModelData& data) {
  std::vector<StimStats> st;
  st.reserve(data.x.size());
  for (std::size_t j = 0; j < data.x.size(); ++j) {
    const auto& xs = data.x[j].values();
    const auto& ys = data.y[j].values();
    StimStats s{static_cast<double>(xs.size()), 0, 0, 0, 0, 0};
    for (std::size_t m = 0; m < xs.size(); ++m) {
      s.Sx += xs[m];
      s.Sxx += xs[m] * xs[m];
      s.Sy += ys[m];
      s.Sxy += xs[m] * ys[m];
      s.Syy += ys[m] * ys[m];
    }
    st.push_back(s);
  }
  return st;
}

// Restricted -2 log-likelihood with beta profiled out by generalized least
// squares; optionally fills the per-stimulus pieces needed for BLUPs.
Eval eval_reml(const std::vector<StimStats>& st, double s2, double g0,
               double g1, std::vector<PerStim>* per_stim) {
  Eval ev;
  double logdet_sum = 0, q = 0, u0 = 0, u1 = 0;
  double F00 = 0, F01 = 0, F11 = 0;
  double N = 0;
  if (per_stim) per_stim->clear();
  for (const StimStats& s : st) {
    N += s.T;
    const double Sa = s.T / s2, Sb = s.Sx / s2, Sd = s.Sxx / s2;
    const double Aa = 1.0 / g0 + Sa, Ab = Sb, Ad = 1.0 / g1 + Sd;
    const double detA = Aa * Ad - Ab * Ab;
    if (!(detA > 0) || !std::isfinite(detA)) return ev;
    const double t0 = s.Sy / s2, t1 = s.Sxy / s2;
    const double it0 = (Ad * t0 - Ab * t1) / detA;
    const double it1 = (-Ab * t0 + Aa * t1) / detA;
    const double w0 = t0 - (Sa * it0 + Sb * it1);
    const double w1 = t1 - (Sb * it0 + Sd * it1);
    const double yVy = s.Syy / s2 - (t0 * it0 + t1 * it1);
    const double B00 = (Sa * Ad - Sb * Ab) / detA;
    const double B01 = (-Sa * Ab + Sb * Aa) / detA;
    const double B10 = (Sb * Ad - Sd * Ab) / detA;
    const double B11 = (-Sb * Ab + Sd * Aa) / detA;
    const double C00 = B00 * Sa + B01 * Sb;
    const double C01 = B00 * Sb + B01 * Sd;
    const double C11 = B10 * Sb + B11 * Sd;
    const double f00 = Sa - C00, f01 = Sb - C01, f11 = Sd - C11;
    logdet_sum += s.T * std::log(s2) + std::log(g0) + std::log(g1) +
                  std::log(detA);
    q += yVy;
    u0 += w0;
    u1 += w1;
    F00 += f00;
    F01 += f01;
    F11 += f11;
    if (per_stim) per_stim->push_back({w0, w1, f00, f01, f11});
  }
  const double detF = F00 * F11 - F01 * F01;
  if (!(detF > 0) || !std::isfinite(detF)) return ev;
  ev.beta0 = (F11 * u0 - F01 * u1) / detF;
  ev.beta1 = (-F01 * u0 + F00 * u1) / detF;
  const double quad = q - (ev.beta0 * u0 + ev.beta1 * u1);
  ev.neg2ll = logdet_sum + std::log(detF) + quad +
              (N - 2.0) * std::log(2.0 * std::numbers::pi);
  ev.ok = std::isfinite(ev.neg2ll);
  if (!ev.ok) ev.neg2ll = kInf;
  return ev;
}

void validate(const MixedModelData& data) {
  if (data.x.size() < 2)
    throw std::invalid_argument("fit_reml: needs at least 2 stimuli");
  if (data.y.size() != data.x.size())
    throw std::invalid_argument("fit_reml: x and y counts differ");
  for (std::size_t j = 0; j < data.x.size(); ++j) {
    if (!(data.x[j].grid() == data.y[j].grid()))
      throw std::invalid_argument("fit_reml: stimulus grids differ");
    if (data.x[j].size() < 3)
      throw std::invalid_argument("fit_reml: a stimulus has < 3 points");
    const auto& xs = data.x[j].values();
    if (*std::max_element(xs.begin(), xs.end()) ==
        *std::min_element(xs.begin(), xs.end()))
      throw std::invalid_argument("fit_reml: a stimulus target is constant");
  }
}

struct Criterion {
  const std::vector<StimStats>& st;
  double floor_v, cap_v;
  mutable int evals = 0;

  double operator()(const double* th) const {
    ++evals;
    const double s2 = std::clamp(std::exp(th[0]), floor_v, cap_v);
    const double g0 = std::clamp(std::exp(th[1]), floor_v, cap_v);
    const double g1 = std::clamp(std::exp(th[2]), floor_v, cap_v);
    return eval_reml(st, s2, g0, g1, nullptr).neg2ll;
  }
};

struct NmResult {
  std::array<double, 3> x;
  double f;
  bool converged;
};

// Nelder-Mead on 3 parameters: reflection 1, expansion 2, contraction 0.5,
// shrink 0.5, stop when the simplex's objective spread falls under a
// relative 1e-8.
NmResult nelder_mead(const Criterion& crit, std::array<double, 3> start,
                     double step, int max_iter) {
  constexpr int n = 3;
  std::array<std::array<double, 3>, 4> xs;
  std::array<double, 4> fs;
  for (int v = 0; v < n + 1; ++v) {
    xs[static_cast<size_t>(v)] = start;
    if (v > 0) xs[static_cast<size_t>(v)][static_cast<size_t>(v - 1)] += step;
    fs[static_cast<size_t>(v)] = crit(xs[static_cast<size_t>(v)].data());
  }
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    // order: index 0 best, n worst
    std::array<int, 4> ord{0, 1, 2, 3};
    std::sort(ord.begin(), ord.end(),
              [&](int a, int b) { return fs[static_cast<size_t>(a)] < fs[static_cast<size_t>(b)]; });
    std::array<std::array<double, 3>, 4> nxs;
    std::array<double, 4> nfs;
    for (int v = 0; v < n + 1; ++v) {
      nxs[static_cast<size_t>(v)] = xs[static_cast<size_t>(ord[static_cast<size_t>(v)])];
      nfs[static_cast<size_t>(v)] = fs[static_cast<size_t>(ord[static_cast<size_t>(v)])];
    }
    xs = nxs;
    fs = nfs;
    if (std::abs(fs[3] - fs[0]) <= 1e-8 * (std::abs(fs[0]) + 1e-8)) {
      converged = true;
      break;
    }
    std::array<double, 3> cen{};
    for (int v = 0; v < n; ++v)
      for (int d = 0; d < n; ++d)
        cen[static_cast<size_t>(d)] += xs[static_cast<size_t>(v)][static_cast<size_t>(d)] / n;
    auto combine = [&](double coef) {
      std::array<double, 3> p;
      for (int d = 0; d < n; ++d)
        p[static_cast<size_t>(d)] = cen[static_cast<size_t>(d)] +
            coef * (xs[3][static_cast<size_t>(d)] - cen[static_cast<size_t>(d)]);
      return p;
    };
    const auto xr = combine(-1.0);
    const double fr = crit(xr.data());
    if (fr < fs[0]) {
      const auto xe = combine(-2.0);
      const double fe = crit(xe.data());
      if (fe < fr) {
        xs[3] = xe;
        fs[3] = fe;
      } else {
        xs[3] = xr;
        fs[3] = fr;
      }
    } else if (fr < fs[2]) {
      xs[3] = xr;
      fs[3] = fr;
    } else {
      const bool outside = fr < fs[3];
      const auto xc = combine(outside ? -0.5 : 0.5);
      const double fc = crit(xc.data());
      if (fc < std::min(fr, fs[3])) {
        xs[3] = xc;
        fs[3] = fc;
      } else {
        for (int v = 1; v < n + 1; ++v) {
          for (int d = 0; d < n; ++d)
            xs[static_cast<size_t>(v)][static_cast<size_t>(d)] =
                xs[0][static_cast<size_t>(d)] +
                0.5 * (xs[static_cast<size_t>(v)][static_cast<size_t>(d)] - xs[0][static_cast<size_t>(d)]);
          fs[static_cast<size_t>(v)] = crit(xs[static_cast<size_t>(v)].data());
        }
      }
    }
  }
  int besti = 0;
  for (int v = 1; v < n + 1; ++v)
    if (fs[static_cast<size_t>(v)] < fs[static_cast<size_t>(besti)]) besti = v;
  return {xs[static_cast<size_t>(besti)], fs[static_cast<size_t>(besti)], converged};
}

}  // namespace

MixedModelFit fit_reml(const MixedModelData& data) {
  validate(data);
  const auto st = collect_stats(data);
  const std::size_t J = st.size();

  double N = 0, Sy = 0, Syy = 0;
  for (const auto& s : st) {
    N += s.T;
    Sy += s.Sy;
    Syy += s.Syy;
  }
  const double var_y = Syy / N - (Sy / N) * (Sy / N);
  if (!(var_y > 0))
    throw std::invalid_argument("fit_reml: response is constant");
  const double floor_v = 1e-10 * var_y;
  const double cap_v = 1e10 * var_y;

  // Method-of-moments start: per-stimulus least squares lines give the
  // spread of intercepts and slopes; their residuals give the noise level.
  double s2_init = 0, mi = 0, ms = 0, vi = 0, vs = 0;
  std::vector<double> ints, slopes;
  for (const auto& s : st) {
    const double den = s.Sxx - s.Sx * s.Sx / s.T;
    const double slope = den > 0 ? (s.Sxy - s.Sx * s.Sy / s.T) / den : 0.0;
    const double intc = (s.Sy - slope * s.Sx) / s.T;
    double rss = s.Syy + s.T * intc * intc + slope * slope * s.Sxx -
                 2.0 * intc * s.Sy - 2.0 * slope * s.Sxy +
                 2.0 * intc * slope * s.Sx;
    rss = std::max(rss, 0.0);
    s2_init += rss / std::max(s.T - 2.0, 1.0);
    ints.push_back(intc);
    slopes.push_back(slope);
  }
  s2_init /= static_cast<double>(J);
  for (std::size_t j = 0; j < J; ++j) {
    mi += ints[j] / static_cast<double>(J);
    ms += slopes[j] / static_cast<double>(J);
  }
  for (std::size_t j = 0; j < J; ++j) {
    vi += (ints[j] - mi) * (ints[j] - mi) / static_cast<double>(J - 1);
    vs += (slopes[j] - ms) * (slopes[j] - ms) / static_cast<double>(J - 1);
  }

  Criterion crit{st, floor_v, cap_v, 0};
  std::array<double, 3> start{std::log(std::max(s2_init, floor_v)),
                              std::log(std::max(vi, floor_v)),
                              std::log(std::max(vs, floor_v))};

  // Deterministic restart schedule: re-seed the simplex around the best
  // point with shrinking, sign-alternating steps.
  NmResult best = nelder_mead(crit, start, 0.5, 400);
  const double restart_steps[] = {-0.5, 0.25, -0.125};
  for (double s : restart_steps) {
    NmResult r = nelder_mead(crit, best.x, s, 400);
    if (r.f <= best.f) best = r;
  }

  const double s2 = std::clamp(std::exp(best.x[0]), floor_v, cap_v);
  const double g0 = std::clamp(std::exp(best.x[1]), floor_v, cap_v);
  const double g1 = std::clamp(std::exp(best.x[2]), floor_v, cap_v);

  std::vector<PerStim> per_stim;
  const Eval ev = eval_reml(st, s2, g0, g1, &per_stim);
  if (!ev.ok) throw std::runtime_error("fit_reml: likelihood degenerate at optimum");

  MixedModelFit fit;
  fit.beta0 = ev.beta0;
  fit.beta1 = ev.beta1;
  fit.sigma2 = s2;
  fit.sigma2_b0 = g0;
  fit.sigma2_b1 = g1;
  fit.reml_loglik = -0.5 * ev.neg2ll;
  fit.converged = best.converged;
  fit.evaluations = crit.evals;
  fit.at_lower_bound = {s2 <= 10.0 * floor_v, g0 <= 10.0 * floor_v,
                        g1 <= 10.0 * floor_v};
  fit.blups.reserve(J);
  for (const PerStim& p : per_stim) {
    const double r0 = p.w0 - (p.f00 * ev.beta0 + p.f01 * ev.beta1);
    const double r1 = p.w1 - (p.f01 * ev.beta0 + p.f11 * ev.beta1);
    fit.blups.push_back({g0 * r0, g1 * r1});
  }
  return fit;
}

double reml_neg2_loglik(const MixedModelData& data, double sigma2,
                        double sigma2_b0, double sigma2_b1) {
  validate(data);
  if (!(sigma2 > 0) || !(sigma2_b0 > 0) || !(sigma2_b1 > 0))
    throw std::invalid_argument("reml_neg2_loglik: variances must be positive");
  return eval_reml(collect_stats(data), sigma2, sigma2_b0, sigma2_b1, nullptr)
      .neg2ll;
}

FitMetrics fit_metrics(const MixedModelData& data, const MixedModelFit& fit) {
  validate(data);
  if (data.warpings.size() != data.x.size())
    throw std::invalid_argument("fit_metrics: warping count mismatch");
  if (fit.blups.size() != data.x.size())
    throw std::invalid_argument("fit_metrics: fit does not match data");
  FitMetrics fm;
  for (std::size_t j = 0; j < data.x.size(); ++j) {
    fm.mean_phase += phase_distance(data.warpings[j]) /
                     static_cast<double>(data.x.size());
    const auto& xs = data.x[j].values();
    const auto& ys = data.y[j].values();
    std::vector<double> sq(xs.size());
    for (std::size_t m = 0; m < xs.size(); ++m) {
      const double pred = (fit.beta0 + fit.blups[j][0]) +
                          (fit.beta1 + fit.blups[j][1]) * xs[m];
      const double d = ys[m] - pred;
      sq[m] = d * d;
    }
    fm.vertical += trapezoid(sq, data.x[j].grid().dt());
  }
  return fm;
}

}  // namespace eawarp
