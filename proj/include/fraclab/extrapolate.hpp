#pragma once

#include <cstddef>
#include <vector>

namespace fraclab {

struct LimitEstimate {
    double value = 0.0;
    double uncertainty = 0.0;
    bool extrapolated = false;  // false when the guard fell back to the last value
};

/// Estimates lim_{r->0} f(r) from ladder samples (radii descending). Uses
/// Aitken acceleration on the three smallest radii when the differences
/// contract cleanly; otherwise returns the value at the smallest radius with
/// the last difference as uncertainty. `noise` is an absolute noise floor.
LimitEstimate extrapolate_to_zero(const std::vector<double>& radii,
                                  const std::vector<double>& values, double noise);

/// d log f / d log r at ladder index k by the centered difference over the
/// neighboring ladder radii. Exact for power laws f = c r^beta. Requires
/// 1 <= k <= size-2 and positive values.
double ladder_log_slope(const std::vector<double>& radii, const std::vector<double>& values,
                        std::size_t k);

} // namespace fraclab
