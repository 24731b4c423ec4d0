#include "eawarp/srvf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eawarp/numeric.hpp"

namespace eawarp {

namespace {

std::vector<double> grid_times(const UniformGrid& g) {
  std::vector<double> ts(static_cast<size_t>(g.n()));
  for (int m = 0; m < g.n(); ++m) ts[static_cast<size_t>(m)] = g.at(m);
  return ts;
}

}  // namespace

Srvf::Srvf(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (!grid_.is_unit())
    throw std::invalid_argument("Srvf: grid must be the unit grid");
  if (static_cast<int>(values_.size()) != grid_.n())
    throw std::invalid_argument("Srvf: value count != grid size");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("Srvf: values must be finite");
}

double Srvf::eval(double t) const {
  const double u = t * static_cast<double>(grid_.n() - 1);
  return lerp_index(values_, u);
}

Srvf to_srvf(const SampledFunction& f) {
  if (!f.grid().is_unit())
    throw std::invalid_argument("to_srvf: f must be on the unit grid");
  if (f.size() < 3)
    throw std::invalid_argument("to_srvf: needs at least 3 points");
  const auto ts = grid_times(f.grid());
  const auto d = finite_difference(f.values(), ts);
  std::vector<double> q(d.size());
  for (size_t m = 0; m < d.size(); ++m) {
    const double s = (d[m] > 0) - (d[m] < 0);
    q[m] = s * std::sqrt(std::abs(d[m]));
  }
  return Srvf(f.grid(), std::move(q));
}

Srvf group_action(const Srvf& q, const WarpingFunction& g) {
  if (q.grid() != g.grid())
    throw std::invalid_argument("group_action: q and g must share one grid");
  const auto ts = grid_times(g.grid());
  const auto dg = finite_difference(g.values(), ts);
  const int n = q.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double sq = std::sqrt(std::max(dg[static_cast<size_t>(m)], 0.0));
    out[static_cast<size_t>(m)] = q.eval(g[m]) * sq;
  }
  return Srvf(q.grid(), std::move(out));
}

double srvf_l2_distance_sq(const Srvf& a, const Srvf& b) {
  if (a.grid() != b.grid())
    throw std::invalid_argument("srvf_l2_distance: grids must match");
  std::vector<double> e(static_cast<size_t>(a.size()));
  for (int m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    e[static_cast<size_t>(m)] = d * d;
  }
  return unit_trapezoid(e);
}

double srvf_l2_distance(const Srvf& a, const Srvf& b) {
  return std::sqrt(srvf_l2_distance_sq(a, b));
}

double phase_distance(const WarpingFunction& g) {
  const auto ts = grid_times(g.grid());
  const auto dg = finite_difference(g.values(), ts);
  std::vector<double> root(dg.size());
  for (size_t m = 0; m < dg.size(); ++m)
    root[m] = std::sqrt(std::max(dg[m], 0.0));
  const double inner = std::clamp(unit_trapezoid(root), -1.0, 1.0);
  return std::acos(inner);
}

}  // namespace eawarp
