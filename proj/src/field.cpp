#include "fraclab/field.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab::interp {

namespace {

struct CellCoord {
    int i;      // lower node index
    double f;   // fractional offset in [0,1]
};

CellCoord locate(double t, double t0, double h, int count) {
    double g = (t - t0) / h;
    int i = static_cast<int>(std::floor(g));
    i = std::clamp(i, 0, count - 2);
    return {i, std::clamp(g - i, 0.0, 1.0)};
}

} // namespace

double value(const ExtensionGrid& grid, const std::vector<double>& nodal,
             const SpatialPoint& x, double y) {
    double v, g[3];
    value_gradient(grid, nodal, x, y, v, g);
    return v;
}

void value_gradient(const ExtensionGrid& grid, const std::vector<double>& nodal,
                    const SpatialPoint& x, double y, double& v, double grad[3]) {
    const double ysign = y < 0.0 ? -1.0 : 1.0;
    y = std::abs(y);

    const CellCoord cx1 = locate(x[0], -grid.x_box, grid.hx, grid.nx);
    const CellCoord cy = locate(y, 0.0, grid.hy, grid.ny);

    if (grid.n == 1) {
        const double v00 = nodal[grid.node(cx1.i, 0, cy.i)];
        const double v10 = nodal[grid.node(cx1.i + 1, 0, cy.i)];
        const double v01 = nodal[grid.node(cx1.i, 0, cy.i + 1)];
        const double v11 = nodal[grid.node(cx1.i + 1, 0, cy.i + 1)];
        const double fx = cx1.f, fy = cy.f;
        v = (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
        grad[0] = ((1 - fy) * (v10 - v00) + fy * (v11 - v01)) / grid.hx;
        grad[1] = 0.0;
        grad[2] = ysign * ((1 - fx) * (v01 - v00) + fx * (v11 - v10)) / grid.hy;
        return;
    }

    const CellCoord cx2 = locate(x[1], -grid.x_box, grid.hx, grid.nx);
    double c[2][2][2];
    for (int dj = 0; dj < 2; ++dj)
        for (int d2 = 0; d2 < 2; ++d2)
            for (int d1 = 0; d1 < 2; ++d1)
                c[dj][d2][d1] = nodal[grid.node(cx1.i + d1, cx2.i + d2, cy.i + dj)];

    const double f1 = cx1.f, f2 = cx2.f, fy = cy.f;
    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };

    // value: trilinear
    double v00 = lerp(c[0][0][0], c[0][0][1], f1), v01 = lerp(c[0][1][0], c[0][1][1], f1);
    double v10 = lerp(c[1][0][0], c[1][0][1], f1), v11 = lerp(c[1][1][0], c[1][1][1], f1);
    double vy0 = lerp(v00, v01, f2), vy1 = lerp(v10, v11, f2);
    v = lerp(vy0, vy1, fy);

    // d/dx1
    double a00 = c[0][0][1] - c[0][0][0], a01 = c[0][1][1] - c[0][1][0];
    double a10 = c[1][0][1] - c[1][0][0], a11 = c[1][1][1] - c[1][1][0];
    grad[0] = lerp(lerp(a00, a01, f2), lerp(a10, a11, f2), fy) / grid.hx;
    // d/dx2
    grad[1] = lerp(v01 - v00, v11 - v10, fy) / grid.hx;
    // d/dy
    grad[2] = ysign * (vy1 - vy0) / grid.hy;
}

} // namespace fraclab::interp
