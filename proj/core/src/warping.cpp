#include "eawarp/warping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eawarp/numeric.hpp"

namespace eawarp {

WarpingFunction::WarpingFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (!grid_.is_unit())
    throw std::invalid_argument("WarpingFunction: grid must be the unit grid");
  if (static_cast<int>(values_.size()) != grid_.n())
    throw std::invalid_argument("WarpingFunction: value count != grid size");
  if (values_.front() != 0.0 || values_.back() != 1.0)
    throw std::invalid_argument(
        "WarpingFunction: must map 0 to 0 and 1 to 1 exactly");
  for (size_t m = 0; m < values_.size(); ++m) {
    const double v = values_[m];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw std::invalid_argument("WarpingFunction: values must lie in [0,1]");
    if (m > 0 && v < values_[m - 1])
      throw std::invalid_argument("WarpingFunction: values must not decrease");
  }
}

WarpingFunction WarpingFunction::from_samples(UniformGrid grid,
                                              std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("from_samples: empty");
  values.front() = 0.0;
  values.back() = 1.0;
  for (size_t m = 0; m < values.size(); ++m) {
    values[m] = std::clamp(values[m], 0.0, 1.0);
    if (m > 0 && values[m] < values[m - 1]) {
      if (values[m - 1] - values[m] > 1e-9)
        throw std::invalid_argument(
            "from_samples: decrease exceeds rounding tolerance");
      values[m] = values[m - 1];
    }
  }
  return WarpingFunction(grid, std::move(values));
}

WarpingFunction WarpingFunction::identity(int n) {
  UniformGrid g = UniformGrid::unit(n);
  std::vector<double> v(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) v[static_cast<size_t>(m)] = g.at(m);
  return WarpingFunction(g, std::move(v));
}

double WarpingFunction::eval(double t) const {
  const double u = t * static_cast<double>(grid_.n() - 1);
  return lerp_index(values_, u);
}

SampledFunction apply_warping(const SampledFunction& f,
                              const WarpingFunction& g) {
  if (!f.grid().is_unit())
    throw std::invalid_argument("apply_warping: f must be on the unit grid");
  const int n = f.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m)
    out[static_cast<size_t>(m)] = f.eval(g.eval(f.grid().at(m)));
  return SampledFunction(f.grid(), std::move(out));
}

WarpingFunction invert_warping(const WarpingFunction& g) {
  const int n = g.size();
  const auto& v = g.values();
  std::vector<double> inv(static_cast<size_t>(n));
  inv.front() = 0.0;
  inv.back() = 1.0;
  size_t lo = 0;  // v is sorted and targets scan upward, so resume the scan
  for (int m = 1; m + 1 < n; ++m) {
    const double u = g.grid().at(m);
    while (lo + 1 < v.size() && v[lo + 1] < u) ++lo;
    // v[lo] <= ... < u <= v[i] for the first i > lo with v[i] >= u.
    size_t i = lo + 1;
    while (v[i] < u) ++i;
    double t;
    if (v[i] == u) {
      // Exact hit: take the first preimage (left endpoint of any flat run).
      size_t first = i;
      while (first > 0 && v[first - 1] == u) --first;
      t = g.grid().at(static_cast<int>(first));
    } else {
      const double t0 = g.grid().at(static_cast<int>(i - 1));
      const double t1 = g.grid().at(static_cast<int>(i));
      t = t0 + (u - v[i - 1]) / (v[i] - v[i - 1]) * (t1 - t0);
    }
    inv[static_cast<size_t>(m)] = t;
  }
  return WarpingFunction::from_samples(g.grid(), std::move(inv));
}

WarpingFunction compose_warpings(const WarpingFunction& g1,
                                 const WarpingFunction& g2) {
  const int n = g2.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m)
    out[static_cast<size_t>(m)] = g1.eval(g2[m]);
  return WarpingFunction::from_samples(g2.grid(), std::move(out));
}

double sup_deviation(const WarpingFunction& g, double native_span) {
  if (!(native_span > 0) || !std::isfinite(native_span))
    throw std::invalid_argument("sup_deviation: span must be positive");
  double d = 0;
  for (int m = 0; m < g.size(); ++m)
    d = std::max(d, std::abs(g[m] - g.grid().at(m)));
  return d * native_span;
}

NormalizedBound NormalizedBound::unbounded() {
  NormalizedBound b;
  b.bounded_ = false;
  b.nu_native_ = std::numeric_limits<double>::infinity();
  b.nu_norm_ = std::numeric_limits<double>::infinity();
  return b;
}

NormalizedBound NormalizedBound::native(double nu, double span) {
  if (!std::isfinite(nu) || !(nu > 0))
    throw std::invalid_argument("NormalizedBound: nu must be positive");
  if (!std::isfinite(span) || !(span > 0))
    throw std::invalid_argument("NormalizedBound: span must be positive");
  NormalizedBound b;
  b.bounded_ = true;
  b.nu_native_ = nu;
  b.nu_norm_ = nu / span;
  return b;
}

}  // namespace eawarp
