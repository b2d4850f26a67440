#pragma once

#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/obstacle.hpp"

namespace fraclab {

namespace interp {

/// Multilinear interpolation of nodal data on the extension grid, with even
/// reflection in y: queries at y < 0 read |y|.
double value(const ExtensionGrid& grid, const std::vector<double>& nodal,
             const SpatialPoint& x, double y);

/// Value and gradient of the multilinear interpolant. grad = (d1, d2, dy);
/// d2 is zero for n = 1. The y-component respects the odd symmetry of the
/// normal derivative of an even function.
void value_gradient(const ExtensionGrid& grid, const std::vector<double>& nodal,
                    const SpatialPoint& x, double y, double& v, double grad[3]);

} // namespace interp

/// Nodal values of the extension solution on the upper half grid (even in y),
/// plus solver status. The trace u(x) = values at layer j = 0.
struct SolutionField {
    ExtensionGrid grid;
    std::vector<double> values;
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;

    double value(int i1, int i2, int j) const { return values[grid.node(i1, i2, j)]; }
    double& value(int i1, int i2, int j) { return values[grid.node(i1, i2, j)]; }
    double trace(int i1, int i2 = 0) const { return values[grid.trace_node(i1, i2)]; }

    double interpolate(const SpatialPoint& x, double y) const {
        return interp::value(grid, values, x, y);
    }
    double interpolate_trace(const SpatialPoint& x) const { return interpolate(x, 0.0); }
};

/// Samples an analytic function f(x, y) onto a field (used by manufactured
/// and polynomial instances).
template <typename F>
SolutionField sample_field(const ExtensionGrid& grid, F&& f) {
    SolutionField out;
    out.grid = grid;
    out.values.resize(grid.num_nodes());
    for (int j = 0; j < grid.ny; ++j)
        for (int i2 = 0; i2 < (grid.n == 2 ? grid.nx : 1); ++i2)
            for (int i1 = 0; i1 < grid.nx; ++i1) {
                SpatialPoint p{grid.x(i1), grid.n == 2 ? grid.x(i2) : 0.0};
                out.values[grid.node(i1, i2, j)] = f(p, grid.y(j));
            }
    out.converged = true;
    return out;
}

} // namespace fraclab
