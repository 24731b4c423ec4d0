#pragma once

#include <string>

#include "eawarp/grid.hpp"
#include "eawarp/srvf.hpp"
#include "eawarp/warping.hpp"

namespace eawarp {

/// Search strategy for the lattice dynamic program.
struct DpMode {
  bool exhaustive = false;  // all strictly-earlier predecessors (small grids)
  int window = 7;           // max index step per segment in windowed mode

  static DpMode windowed(int w) { return {false, w}; }
  static DpMode exhaustive_mode() { return {true, 0}; }
};

/// How to produce the warping for a pair: keep the identity, search a pure
/// time shift, or run the elastic search (optionally constrained).
struct AlignmentMethod {
  enum class Kind { identity, fixed_delay, srvf };

  Kind kind = Kind::srvf;
  NormalizedBound bound = NormalizedBound::unbounded();
  DpMode dp{};

  static AlignmentMethod identity();
  static AlignmentMethod fixed_delay(NormalizedBound bound);
  static AlignmentMethod srvf(NormalizedBound bound, DpMode dp = {});

  /// Report label: no_alignment, fixed_delay, penalized_srvf,
  /// unpenalized_srvf.
  std::string label() const;
};

struct AlignmentResult {
  WarpingFunction warping;   // gamma-hat on the normalized grid
  SampledFunction aligned;   // y o gamma-hat, on y's native grid
  double cost = 0;           // objective value achieved (see each aligner)
  AlignmentMethod method;
  double sup_deviation = 0;  // sup |gamma-hat(t) - t| in native time units
  double phase_distance = 0;
};

/// Baseline that never warps: gamma-hat = identity, aligned = y, cost is the
/// squared L2 distance between the representations of x and y.
AlignmentResult align_identity(const SampledFunction& x,
                               const SampledFunction& y);

/// Best single delay: gamma(0) = 0, gamma(t) = min(t + delta, end of domain)
/// at every later grid node (the warp saturates flat at the right edge).
/// delta scans the grid multiples in [0, nu]; cost is the squared L2
/// distance between representations after warping, ties broken toward the
/// smaller delta. Requires a bounded constraint.
AlignmentResult align_fixed_delay(const SampledFunction& x,
                                  const SampledFunction& y,
                                  const NormalizedBound& bound);

/// Elastic alignment: minimizes || q_x - (q_y, gamma) ||^2 over piecewise
/// linear warpings through lattice nodes satisfying |gamma(t) - t| <= nu,
/// by dynamic programming over the node lattice. Segment costs use the
/// trapezoid rule on the sub-grid the segment spans; cost is the optimal
/// objective. Unbounded nu reproduces the classical elastic solution.
/// Exhaustive mode considers every strictly-earlier predecessor and is
/// limited to grids of at most 61 points; windowed mode caps the per-segment
/// index step at dp.window.
AlignmentResult align_srvf(const SampledFunction& x, const SampledFunction& y,
                           const NormalizedBound& bound, const DpMode& dp = {});

/// Dispatch on method.kind. x and y must share one grid with n >= 3.
AlignmentResult align(const SampledFunction& x, const SampledFunction& y,
                      const AlignmentMethod& method);

}  // namespace eawarp
