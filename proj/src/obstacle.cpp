#include "fraclab/obstacle.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "fraclab/jet.hpp"

namespace fraclab {

namespace {

// exp(-1/u) extended by 0 for u <= 0; the standard smooth partition kernel.
Jet3 bump(const Jet3& u) {
    if (u.v <= 0.0) return Jet3::constant(0.0);
    return exp(-recip(u));
}

// C-infinity step: 1 at t = 0, 0 at t = 1, flat at both ends.
Jet3 smooth_step_down(const Jet3& t) {
    const Jet3 f1 = bump(1.0 - t);
    const Jet3 f0 = bump(t);
    return f1 / (f0 + f1);
}

struct CapProfile {
    double h0, kappa, rho, width, floor;

    // Radial profile F(r) and derivatives up to third order.
    Jet3 eval(double r) const {
        if (r <= rho) {
            return {h0 - kappa * r * r, -2.0 * kappa * r, -2.0 * kappa, 0.0};
        }
        if (r >= rho + width) {
            return Jet3::constant(-floor);
        }
        const Jet3 rj = Jet3::variable(r);
        const Jet3 t = (1.0 / width) * (rj - Jet3::constant(rho));
        const Jet3 chi = smooth_step_down(t);
        const Jet3 cap = Jet3::constant(h0) - kappa * (rj * rj);
        return chi * cap + (Jet3::constant(1.0) - chi) * Jet3::constant(-floor);
    }
};

} // namespace

ObstacleSpec make_cap_obstacle(int n, double h0, double kappa, double rho, double blend_width) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("make_cap_obstacle: n must be 1 or 2");
    if (!(h0 > 0.0))
        throw std::invalid_argument("make_cap_obstacle: h0 must be positive ({phi>0} would be empty)");
    if (!(kappa > 0.0) || !(rho > 0.0) || !(blend_width > 0.0))
        throw std::invalid_argument("make_cap_obstacle: kappa, rho, blend_width must be positive");
    const double support = std::sqrt(h0 / kappa);
    if (rho < support)
        throw std::invalid_argument(
            "make_cap_obstacle: rho must be >= sqrt(h0/kappa) so the cap is nonpositive "
            "before the blend starts");

    auto prof = std::make_shared<CapProfile>(CapProfile{h0, kappa, rho, blend_width, kappa * rho * rho});

    auto radius = [n](const SpatialPoint& p) {
        return n == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
    };

    ObstacleSpec spec;
    spec.n = n;
    spec.gamma = 1.0;
    spec.c0 = 2.0 * n * kappa;
    spec.support_radius = support;
    spec.eval_phi = [prof, radius](const SpatialPoint& p) { return prof->eval(radius(p)).v; };
    spec.eval_grad_phi = [prof, radius, n](const SpatialPoint& p) -> SpatialVec {
        const double r = radius(p);
        if (r == 0.0) return {0.0, 0.0};
        const Jet3 f = prof->eval(r);
        if (n == 1) return {f.d1 * (p[0] < 0.0 ? -1.0 : 1.0), 0.0};
        return {f.d1 * p[0] / r, f.d1 * p[1] / r};
    };
    spec.eval_lap_phi = [prof, radius, n](const SpatialPoint& p) {
        const double r = radius(p);
        if (r == 0.0) return -2.0 * n * prof->kappa;
        const Jet3 f = prof->eval(r);
        return n == 1 ? f.d2 : f.d2 + f.d1 / r;
    };
    spec.eval_grad_lap_phi = [prof, radius, n](const SpatialPoint& p) -> SpatialVec {
        const double r = radius(p);
        if (r == 0.0) return {0.0, 0.0};
        const Jet3 f = prof->eval(r);
        if (n == 1) return {f.d3 * (p[0] < 0.0 ? -1.0 : 1.0), 0.0};
        const double radial = f.d3 + f.d2 / r - f.d1 / (r * r);
        return {radial * p[0] / r, radial * p[1] / r};
    };
    return spec;
}

ObstacleSpec make_constant_obstacle(int n, double level) {
    ObstacleSpec spec;
    spec.n = n;
    spec.gamma = 1.0;
    spec.c0 = 0.0;
    spec.support_radius = 0.0;
    spec.eval_phi = [level](const SpatialPoint&) { return level; };
    spec.eval_grad_phi = [](const SpatialPoint&) -> SpatialVec { return {0.0, 0.0}; };
    spec.eval_lap_phi = [](const SpatialPoint&) { return 0.0; };
    spec.eval_grad_lap_phi = [](const SpatialPoint&) -> SpatialVec { return {0.0, 0.0}; };
    return spec;
}

void validate_obstacle_in_box(const ObstacleSpec& obstacle, const ExtensionGrid& grid) {
    if (obstacle.n != grid.n)
        throw std::invalid_argument("obstacle dimension does not match grid");
    if (obstacle.support_radius <= 0.0) return;  // trivial obstacle, nothing to contain
    if (obstacle.support_radius >= grid.x_box - 2.0 * grid.hx)
        throw std::invalid_argument("{phi>0} escapes the x-box (support radius " +
                                    std::to_string(obstacle.support_radius) + " vs half-width " +
                                    std::to_string(grid.x_box) + ")");

    // Sampled checks: positivity somewhere, nonpositive at the box edge,
    // uniform concavity on {phi > 0}.
    bool positive_seen = false;
    const int m = 41;
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < (grid.n == 2 ? m : 1); ++k) {
            SpatialPoint p{-grid.x_box + 2.0 * grid.x_box * i / (m - 1),
                           grid.n == 2 ? -grid.x_box + 2.0 * grid.x_box * k / (m - 1) : 0.0};
            const double v = obstacle.eval_phi(p);
            if (v > 0.0) {
                positive_seen = true;
                const double r = grid.n == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
                if (r > obstacle.support_radius + 1e-12)
                    throw std::invalid_argument("phi > 0 outside the declared support radius");
                if (obstacle.c0 > 0.0 && obstacle.eval_lap_phi(p) > -obstacle.c0 + 1e-10)
                    throw std::invalid_argument("lap phi exceeds -c0 on {phi > 0}");
            }
        }
    }
    if (!positive_seen)
        throw std::invalid_argument("{phi>0} appears empty in the x-box");
}

} // namespace fraclab
