#pragma once

namespace eawarp {

inline constexpr char kVersionString[] = "0.1.0";

/// Identifiers for the fixed numerical conventions baked into this build,
/// echoed into every JSON report so downstream readers can check
/// compatibility without parsing docs.
inline constexpr const char* kConventions[] = {
    "normalized-domain",      // alignment happens on [0,1]
    "linear-interpolation",   // all off-grid evaluation
    "trapezoid-quadrature",   // all integrals
    "central-differences",    // all derivatives (one-sided at ends)
    "windowed-dp-default-7",  // elastic search default window
    "fixed-delay-flat-right-closure",  // delay warps saturate at the end
    "spline-gcv-61-point-grid",        // smoothing penalty search
    "kernel-full-support",             // Gaussian smoother uses all points
};

}  // namespace eawarp
