#include "fraclab/centered_field.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

CenteredField build_v(const SolutionField& field, const ObstacleSpec& obstacle,
                      const SpatialPoint& x0) {
    const ExtensionGrid& g = field.grid;
    if (std::abs(x0[0]) > g.x_box + 0.5 * g.hx ||
        (g.n == 2 && std::abs(x0[1]) > g.x_box + 0.5 * g.hx))
        throw std::invalid_argument("build_v: center outside grid");

    CenteredField cf;
    cf.grid = g;
    const int c1 = static_cast<int>(std::lround((x0[0] + g.x_box) / g.hx));
    const int c2 = g.n == 2 ? static_cast<int>(std::lround((x0[1] + g.x_box) / g.hx)) : 0;
    cf.center_node = {c1, c2};
    cf.center = {g.x(c1), g.n == 2 ? g.x(c2) : 0.0};

    const double lap0 = obstacle.eval_lap_phi(cf.center);
    const SpatialVec glap0 = obstacle.eval_grad_lap_phi(cf.center);
    const double corr_scale = 1.0 / (2.0 * (1.0 + g.a));

    cf.values.resize(g.num_nodes());
    const int n2 = g.n == 2 ? g.nx : 1;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            SpatialPoint p{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};
            const double phi = obstacle.eval_phi(p);
            double lin = lap0 + glap0[0] * (p[0] - cf.center[0]);
            if (g.n == 2) lin += glap0[1] * (p[1] - cf.center[1]);
            for (int j = 0; j < g.ny; ++j) {
                const double y = g.y(j);
                cf.values[g.node(i1, i2, j)] =
                    field.value(i1, i2, j) - phi + corr_scale * lin * y * y;
            }
        }
    return cf;
}

VResidualReport v_residual_report(const CenteredField& cf, const DiscreteOperator& op,
                                  double gamma) {
    const ExtensionGrid& g = cf.grid;
    const int n2 = g.n == 2 ? g.nx : 1;
    VResidualReport rep;
    const double ax = g.n == 1 ? g.hx : g.hx * g.hx;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                if (g.is_boundary(i1, i2, j)) continue;
                const double rho = op.residual_at(cf.values, i1, i2, j);
                rep.max_scaled = std::max(rep.max_scaled, std::abs(rho) / op.diag(j));
                const double dx1 = g.x(i1) - cf.center[0];
                const double dx2 = g.n == 2 ? g.x(i2) - cf.center[1] : 0.0;
                const double dist = std::hypot(dx1, dx2);
                const double vw = ax * g.y_cell_weight(j);
                const double envelope = std::pow(dist, 1.0 + gamma) + std::pow(g.hx, 1.0 + gamma);
                rep.bound_constant = std::max(rep.bound_constant, std::abs(rho) / (vw * envelope));
            }
    return rep;
}

} // namespace fraclab
