#pragma once

#include <cmath>

namespace fraclab {

/// 3/2-homogeneous profile Re((x + i|y|)^{3/2}), principal branch. Harmonic
/// off the half-line {x <= 0, y = 0}; its trace is x_+^{3/2}, its weighted
/// normal flux vanishes on {x > 0} and is nonpositive on {x <= 0}, so it is
/// the zero-obstacle half-space solution for s = 1/2, n = 1.
inline double signorini_profile(double x, double y) {
    y = std::abs(y);
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double th = std::atan2(y, x);  // [0, pi] in the closed upper half
    return std::pow(r, 1.5) * std::cos(1.5 * th);
}

} // namespace fraclab
