#include "eawarp/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "eawarp/numeric.hpp"

namespace eawarp {

UniformGrid::UniformGrid(double t0, double t1, int n) : t0_(t0), t1_(t1), n_(n) {
  if (!std::isfinite(t0) || !std::isfinite(t1))
    throw std::invalid_argument("UniformGrid: endpoints must be finite");
  if (!(t0 < t1))
    throw std::invalid_argument("UniformGrid: requires t0 < t1");
  if (n < 2)
    throw std::invalid_argument("UniformGrid: requires at least 2 points");
}

double UniformGrid::at(int m) const {
  if (m <= 0) return t0_;
  if (m >= n_ - 1) return t1_;
  const double u = static_cast<double>(m) / static_cast<double>(n_ - 1);
  return t0_ + u * (t1_ - t0_);
}

SampledFunction::SampledFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n())
    throw std::invalid_argument("SampledFunction: value count != grid size");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("SampledFunction: values must be finite");
}

double SampledFunction::eval(double t) const {
  const double u = (t - grid_.t0()) / grid_.dt();
  return lerp_index(values_, u);
}

UnitRescale rescale_to_unit(const SampledFunction& f) {
  return {SampledFunction(UniformGrid::unit(f.size()), f.values()), f.grid()};
}

}  // namespace eawarp
