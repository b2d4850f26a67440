#pragma once

#include <array>
#include <functional>

#include "fraclab/grid.hpp"

namespace fraclab {

using SpatialPoint = std::array<double, 2>;  // x2 ignored for n = 1
using SpatialVec = std::array<double, 2>;

/// Obstacle phi with evaluators for phi, grad phi, lap phi and grad lap phi.
/// gamma is the Holder exponent of the third derivatives, c0 the uniform
/// concavity constant on {phi > 0} (0 when not applicable), support_radius a
/// radius containing {phi > 0}.
struct ObstacleSpec {
    int n = 1;
    std::function<double(const SpatialPoint&)> eval_phi;
    std::function<SpatialVec(const SpatialPoint&)> eval_grad_phi;
    std::function<double(const SpatialPoint&)> eval_lap_phi;
    std::function<SpatialVec(const SpatialPoint&)> eval_grad_lap_phi;
    double gamma = 1.0;
    double c0 = 0.0;
    double support_radius = 0.0;

    double phi(const SpatialPoint& p) const { return eval_phi(p); }
};

/// Quadratic cap h0 - kappa*|x|^2, blended by a C-infinity partition over
/// [rho, rho + blend_width] down to a negative constant. Requires
/// rho >= sqrt(h0/kappa) so the positivity set is exactly the pure quadratic
/// region; then lap phi = -2 n kappa on {phi > 0} and gamma = 1.
ObstacleSpec make_cap_obstacle(int n, double h0, double kappa, double rho, double blend_width);

/// phi identically equal to `level` (use level <= 0 for trivial instances).
ObstacleSpec make_constant_obstacle(int n, double level);

/// Checks that {phi > 0} is nonempty, compactly contained in the x-box, and
/// that lap phi <= -c0 holds on {phi > 0} (by sampling). Throws
/// std::invalid_argument on violation. Trivial obstacles (support_radius = 0)
/// pass the containment check vacuously.
void validate_obstacle_in_box(const ObstacleSpec& obstacle, const ExtensionGrid& grid);

} // namespace fraclab
