#include "fraclab/discrete_operator.hpp"

#include <cmath>

namespace fraclab {

DiscreteOperator assemble_operator(const ExtensionGrid& grid) {
    DiscreteOperator op;
    op.grid = grid;
    const int ny = grid.ny;
    op.c_down_.assign(ny, 0.0);
    op.c_up_.assign(ny, 0.0);
    op.c_x_.assign(ny, 0.0);
    op.diag_.assign(ny, 0.0);

    const double ax = grid.n == 1 ? grid.hx : grid.hx * grid.hx;  // cross-sectional x-area
    const double lx = grid.n == 1 ? 1.0 / grid.hx : 1.0;          // hx^{n-2}

    for (int j = 0; j + 1 < ny; ++j) {
        const double t_up = grid.y_face_transmissibility(j);
        if (j == 0) {
            op.c_up_[0] = 2.0 * ax * t_up;                // both reflected sides
            op.c_x_[0] = 2.0 * lx * grid.y_cell_weight(0);  // half-cell weight, doubled
        } else {
            op.c_up_[j] = ax * t_up;
            op.c_down_[j] = ax * grid.y_face_transmissibility(j - 1);
            op.c_x_[j] = lx * grid.y_cell_weight(j);
        }
        op.diag_[j] = op.c_up_[j] + op.c_down_[j] + 2.0 * grid.n * op.c_x_[j];
    }
    return op;
}

double DiscreteOperator::dirichlet_energy(const std::vector<double>& u) const {
    const ExtensionGrid& g = grid;
    const int n2 = g.n == 2 ? g.nx : 1;
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        // y-faces from row j to j+1: weight 2*ax*T for every j >= 0
        // (c_up_[0] already carries the factor 2).
        const double wy = j == 0 ? c_up_[0] : 2.0 * c_up_[j];
        // x-faces within row j: weight 2*c_x_ off the plane, c_x_ on it.
        const double wx = j == 0 ? c_x_[0] : 2.0 * c_x_[j];
        for (int i2 = 0; i2 < n2; ++i2) {
            for (int i1 = 0; i1 < g.nx; ++i1) {
                const double uc = u[g.node(i1, i2, j)];
                if (j + 1 < g.ny) {
                    const double d = u[g.node(i1, i2, j + 1)] - uc;
                    e += 0.5 * wy * d * d;
                }
                if (i1 + 1 < g.nx) {
                    const double d = u[g.node(i1 + 1, i2, j)] - uc;
                    e += 0.5 * wx * d * d;
                }
                if (g.n == 2 && i2 + 1 < g.nx) {
                    const double d = u[g.node(i1, i2 + 1, j)] - uc;
                    e += 0.5 * wx * d * d;
                }
            }
        }
    }
    return e;
}

} // namespace fraclab
