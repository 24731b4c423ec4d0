#include "eawarp/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eawarp/numeric.hpp"

namespace eawarp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kExhaustiveMaxPoints = 61;

void check_pair(const SampledFunction& x, const SampledFunction& y) {
  if (!(x.grid() == y.grid()))
    throw std::invalid_argument("align: x and y must share one grid");
  if (x.size() < 3)
    throw std::invalid_argument("align: needs at least 3 grid points");
}

AlignmentResult finish(const SampledFunction& x, const SampledFunction& y,
                       WarpingFunction gamma, double cost,
                       const AlignmentMethod& method) {
  UnitRescale yu = rescale_to_unit(y);
  SampledFunction warped = apply_warping(yu.fn, gamma);
  AlignmentResult r{std::move(gamma),
                    SampledFunction(y.grid(), warped.values()),
                    cost,
                    method,
                    0.0,
                    0.0};
  r.sup_deviation = sup_deviation(r.warping, y.grid().span());
  r.phase_distance = phase_distance(r.warping);
  (void)x;
  return r;
}

// One interpolation point of a segment quadrature: y-representation is read
// at base + ofs with fractional weight frac, error is weighted by w.
struct QuadPoint {
  int ofs;
  double frac;
  double w;
};

struct SegmentKind {
  double sqrt_slope;
  std::vector<QuadPoint> pts;  // pts.size() == dk + 1
};

SegmentKind make_segment_kind(int dk, int dl) {
  SegmentKind sk;
  sk.sqrt_slope = std::sqrt(static_cast<double>(dl) / static_cast<double>(dk));
  sk.pts.resize(static_cast<size_t>(dk) + 1);
  for (int i = 0; i <= dk; ++i) {
    double u = static_cast<double>(dl) * static_cast<double>(i) /
               static_cast<double>(dk);
    int ofs = static_cast<int>(u);
    double frac = u - static_cast<double>(ofs);
    if (frac < 1e-12) {
      frac = 0.0;
    } else if (frac > 1.0 - 1e-12) {
      ofs += 1;
      frac = 0.0;
    }
    const double w = (i == 0 || i == dk) ? 0.5 : 1.0;
    sk.pts[static_cast<size_t>(i)] = {ofs, frac, w};
  }
  return sk;
}

// Trapezoid cost of the segment from (k', l') to (k' + dk, l' + dl):
// integral over the dk spanned sub-intervals of the squared difference
// between q_x and the warped q_y (slope dl/dk on the segment).
inline double segment_cost(const std::vector<double>& qx,
                           const std::vector<double>& qy_pad, int kp, int lp,
                           const SegmentKind& sk, double dt) {
  double acc = 0.0;
  const double ss = sk.sqrt_slope;
  for (size_t i = 0; i < sk.pts.size(); ++i) {
    const QuadPoint& p = sk.pts[i];
    const double a = qy_pad[static_cast<size_t>(lp + p.ofs)];
    const double b = qy_pad[static_cast<size_t>(lp + p.ofs) + 1];
    const double qyv = a + p.frac * (b - a);
    const double e = qx[static_cast<size_t>(kp) + i] - ss * qyv;
    acc += p.w * e * e;
  }
  return acc * dt;
}

struct DpOutcome {
  std::vector<double> gamma_values;  // on the unit grid
  double cost;
};

DpOutcome run_dp(const std::vector<double>& qx, const std::vector<double>& qy,
                 const UniformGrid& grid, const NormalizedBound& bound,
                 const DpMode& dp) {
  const int n = grid.n();
  const int T = n - 1;
  const double dt = grid.dt();

  int W;
  if (dp.exhaustive) {
    if (n > kExhaustiveMaxPoints)
      throw std::invalid_argument(
          "align_srvf: exhaustive mode is limited to 61 grid points");
    W = T;
  } else {
    if (dp.window < 1)
      throw std::invalid_argument("align_srvf: window must be >= 1");
    W = std::min(dp.window, T);
  }

  // Feasibility band in index units: |l - k| <= B. The epsilon keeps bounds
  // that are exact grid multiples from rounding down a step.
  int B = T;
  if (bound.bounded()) {
    const double raw = bound.nu_norm() * static_cast<double>(T) + 1e-9;
    B = raw >= static_cast<double>(T) ? T : static_cast<int>(raw);
  }

  std::vector<double> qy_pad(qy);
  qy_pad.push_back(qy.back());

  std::vector<SegmentKind> kinds(static_cast<size_t>(W) * static_cast<size_t>(W));
  for (int dk = 1; dk <= W; ++dk)
    for (int dl = 1; dl <= W; ++dl)
      kinds[static_cast<size_t>(dk - 1) * static_cast<size_t>(W) +
            static_cast<size_t>(dl - 1)] = make_segment_kind(dk, dl);

  const int stride = T + 1;
  std::vector<double> H(static_cast<size_t>(stride) * stride, kInf);
  std::vector<std::int32_t> pred(static_cast<size_t>(stride) * stride, -1);
  H[0] = 0.0;

  for (int k = 1; k <= T; ++k) {
    const int lmin = std::max(1, k - B);
    const int lmax = std::min(T, k + B);
    for (int l = lmin; l <= lmax; ++l) {
      double best = kInf;
      int best_pred = -1;
      int best_dev = 0, best_dk = 0;  // tie-break key
      const int dkmax = std::min(W, k);
      const int dlmax = std::min(W, l);
      for (int dk = 1; dk <= dkmax; ++dk) {
        const int kp = k - dk;
        for (int dl = 1; dl <= dlmax; ++dl) {
          const int lp = l - dl;
          if (std::abs(lp - kp) > B) continue;
          const double hp = H[static_cast<size_t>(kp) * stride + lp];
          if (hp == kInf) continue;
          const SegmentKind& sk =
              kinds[static_cast<size_t>(dk - 1) * static_cast<size_t>(W) +
                    static_cast<size_t>(dl - 1)];
          const double c = hp + segment_cost(qx, qy_pad, kp, lp, sk, dt);
          bool take = false;
          if (best == kInf) {
            take = true;
          } else if (const double tol = 1e-12 * (1.0 + std::abs(best));
                     c < best - tol) {
            take = true;
          } else if (c < best + tol) {
            // Equal cost: prefer the segment closest to unit slope, then
            // the shortest one, so ties resolve to the least-warped and
            // most node-dense path.
            const int dev = std::abs(dl - dk);
            take = dev < best_dev || (dev == best_dev && dk < best_dk);
          }
          if (take) {
            best = c;
            best_pred = kp * stride + lp;
            best_dev = std::abs(dl - dk);
            best_dk = dk;
          }
        }
      }
      H[static_cast<size_t>(k) * stride + l] = best;
      pred[static_cast<size_t>(k) * stride + l] = best_pred;
    }
  }

  const double total = H[static_cast<size_t>(T) * stride + T];
  if (total == kInf)
    throw std::runtime_error("align_srvf: no feasible warping path");

  // Backtrace the node chain, then sample the piecewise-linear warping.
  std::vector<int> chain;
  for (int node = T * stride + T; node >= 0;
       node = pred[static_cast<size_t>(node)])
    chain.push_back(node);
  std::reverse(chain.begin(), chain.end());

  std::vector<double> gv(static_cast<size_t>(n));
  gv[0] = 0.0;
  for (size_t s = 1; s < chain.size(); ++s) {
    const int kp = chain[s - 1] / stride, lp = chain[s - 1] % stride;
    const int k = chain[s] / stride, l = chain[s] % stride;
    const double slope =
        static_cast<double>(l - lp) / static_cast<double>(k - kp);
    for (int m = kp + 1; m < k; ++m)
      gv[static_cast<size_t>(m)] =
          dt * (static_cast<double>(lp) +
                slope * static_cast<double>(m - kp));
    gv[static_cast<size_t>(k)] = grid.at(l);
  }
  return {std::move(gv), total};
}

}  // namespace

AlignmentMethod AlignmentMethod::identity() {
  return {Kind::identity, NormalizedBound::unbounded(), {}};
}

AlignmentMethod AlignmentMethod::fixed_delay(NormalizedBound bound) {
  return {Kind::fixed_delay, bound, {}};
}

AlignmentMethod AlignmentMethod::srvf(NormalizedBound bound, DpMode dp) {
  return {Kind::srvf, bound, dp};
}

std::string AlignmentMethod::label() const {
  switch (kind) {
    case Kind::identity:
      return "no_alignment";
    case Kind::fixed_delay:
      return "fixed_delay";
    case Kind::srvf:
      return bound.bounded() ? "penalized_srvf" : "unpenalized_srvf";
  }
  return "unknown";
}

AlignmentResult align_identity(const SampledFunction& x,
                               const SampledFunction& y) {
  check_pair(x, y);
  const Srvf qx = to_srvf(rescale_to_unit(x).fn);
  const Srvf qy = to_srvf(rescale_to_unit(y).fn);
  return finish(x, y, WarpingFunction::identity(x.size()),
                srvf_l2_distance_sq(qx, qy), AlignmentMethod::identity());
}

AlignmentResult align_fixed_delay(const SampledFunction& x,
                                  const SampledFunction& y,
                                  const NormalizedBound& bound) {
  check_pair(x, y);
  if (!bound.bounded())
    throw std::invalid_argument("align_fixed_delay: requires a bounded nu");
  const int n = x.size();
  const int T = n - 1;
  const UniformGrid unit = UniformGrid::unit(n);
  const Srvf qx = to_srvf(rescale_to_unit(x).fn);
  const Srvf qy = to_srvf(rescale_to_unit(y).fn);

  const int jmax = std::min(
      T, static_cast<int>(bound.nu_norm() * static_cast<double>(T) + 1e-9));
  double best_cost = kInf;
  int best_j = 0;
  for (int j = 0; j <= jmax; ++j) {
    const double delta = unit.dt() * static_cast<double>(j);
    std::vector<double> gv(static_cast<size_t>(n));
    gv[0] = 0.0;
    for (int m = 1; m < n; ++m)
      gv[static_cast<size_t>(m)] = std::min(unit.at(m) + delta, 1.0);
    WarpingFunction g(unit, std::move(gv));
    const double c = srvf_l2_distance_sq(qx, group_action(qy, g));
    if (c < best_cost) {  // scanning upward keeps the smallest delta on ties
      best_cost = c;
      best_j = j;
    }
  }
  const double delta = unit.dt() * static_cast<double>(best_j);
  std::vector<double> gv(static_cast<size_t>(n));
  gv[0] = 0.0;
  for (int m = 1; m < n; ++m)
    gv[static_cast<size_t>(m)] = std::min(unit.at(m) + delta, 1.0);
  return finish(x, y, WarpingFunction(unit, std::move(gv)), best_cost,
                AlignmentMethod::fixed_delay(bound));
}

AlignmentResult align_srvf(const SampledFunction& x, const SampledFunction& y,
                           const NormalizedBound& bound, const DpMode& dp) {
  check_pair(x, y);
  const Srvf qx = to_srvf(rescale_to_unit(x).fn);
  const Srvf qy = to_srvf(rescale_to_unit(y).fn);
  const UniformGrid unit = UniformGrid::unit(x.size());
  DpOutcome out = run_dp(qx.values(), qy.values(), unit, bound, dp);
  return finish(x, y,
                WarpingFunction::from_samples(unit, std::move(out.gamma_values)),
                out.cost, AlignmentMethod::srvf(bound, dp));
}

AlignmentResult align(const SampledFunction& x, const SampledFunction& y,
                      const AlignmentMethod& method) {
  switch (method.kind) {
    case AlignmentMethod::Kind::identity:
      return align_identity(x, y);
    case AlignmentMethod::Kind::fixed_delay:
      return align_fixed_delay(x, y, method.bound);
    case AlignmentMethod::Kind::srvf:
      return align_srvf(x, y, method.bound, method.dp);
  }
  throw std::invalid_argument("align: unknown method");
}

}  // namespace eawarp
