#pragma once

#include <array>
#include <vector>

#include "fraclab/discrete_operator.hpp"
#include "fraclab/field.hpp"
#include "fraclab/obstacle.hpp"

namespace fraclab {

/// The solution recentred at a trace node x0 and corrected by the quadratic
/// term that makes the weighted operator residual of v small off the contact
/// set:
///   v(x,y) = u(x,y) - phi(x)
///            + [lap phi(x0) + grad lap phi(x0) . (x - x0)] y^2 / (2(1+a)).
/// On the trace, v(x,0) = u(x) - phi(x) exactly.
struct CenteredField {
    ExtensionGrid grid;
    SpatialPoint center{0.0, 0.0};
    std::array<int, 2> center_node{0, 0};
    std::vector<double> values;

    double at(int i1, int i2, int j) const { return values[grid.node(i1, i2, j)]; }

    double value(const SpatialPoint& x, double y) const {
        return interp::value(grid, values, x, y);
    }
    void value_gradient(const SpatialPoint& x, double y, double& v, double grad[3]) const {
        interp::value_gradient(grid, values, x, y, v, grad);
    }
};

/// Builds v^{x0}. x0 is snapped to the nearest trace node; throws if it lies
/// outside the grid.
CenteredField build_v(const SolutionField& field, const ObstacleSpec& obstacle,
                      const SpatialPoint& x0);

/// Samples an analytic profile f(x, y) as a centered field (polynomial and
/// manufactured instances).
template <typename F>
CenteredField centered_from_function(const ExtensionGrid& grid, const SpatialPoint& center,
                                     F&& f) {
    CenteredField cf;
    cf.grid = grid;
    cf.center = center;
    cf.values.resize(grid.num_nodes());
    for (int j = 0; j < grid.ny; ++j)
        for (int i2 = 0; i2 < (grid.n == 2 ? grid.nx : 1); ++i2)
            for (int i1 = 0; i1 < grid.nx; ++i1) {
                SpatialPoint p{grid.x(i1), grid.n == 2 ? grid.x(i2) : 0.0};
                cf.values[grid.node(i1, i2, j)] = f(p, grid.y(j));
            }
    return cf;
}

/// Off-plane residual survey for a centered field: the bound
/// |L_a v| <= C |y|^a |x-x0|^{1+gamma} holds off the trace, so the fitted
/// constant is reported (discretization error included, nothing asserted).
struct VResidualReport {
    double max_scaled = 0.0;      // max diagonal-scaled residual, j >= 1
    double bound_constant = 0.0;  // fitted C in the weighted bound
};

VResidualReport v_residual_report(const CenteredField& cf, const DiscreteOperator& op,
                                  double gamma);

} // namespace fraclab
