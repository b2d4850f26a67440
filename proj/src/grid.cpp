#include "fraclab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fraclab {

double power_integral(double p, double alpha, double beta) {
    const double q = p + 1.0;
    return (std::pow(beta, q) - std::pow(alpha, q)) / q;
}

ExtensionGrid build_grid(int n, double s, double x_box, double y_max, int nx, int ny) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("build_grid: n must be 1 or 2");
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("build_grid: s must lie in (0,1), got " + std::to_string(s));
    if (!(x_box > 0.0) || !(y_max > 0.0))
        throw std::invalid_argument("build_grid: extents must be positive");
    if (nx < 9 || ny < 9)
        throw std::invalid_argument("build_grid: need nx, ny >= 9");
    if (nx % 2 == 0 || ny % 2 == 0)
        throw std::invalid_argument("build_grid: node counts must be odd so x = 0 and y = 0 are nodes");

    ExtensionGrid g;
    g.n = n;
    g.s = s;
    g.a = 1.0 - 2.0 * s;
    g.x_box = x_box;
    g.y_max = y_max;
    g.nx = nx;
    g.ny = ny;
    g.hx = 2.0 * x_box / (nx - 1);
    g.hy = y_max / (ny - 1);

    g.face_transmissibility_.resize(ny - 1);
    g.slab_weight_.resize(ny - 1);
    g.cell_weight_.resize(ny);

    const double a = g.a;
    for (int j = 0; j + 1 < ny; ++j) {
        const double y0 = g.y(j), y1 = g.y(j + 1);
        // \int t^{-a} over [y_j, y_{j+1}] is finite since a < 1.
        g.face_transmissibility_[j] = 1.0 / power_integral(-a, y0, y1);
        g.slab_weight_[j] = power_integral(a, y0, y1);
    }
    for (int j = 0; j < ny; ++j) {
        const double lo = (j == 0) ? 0.0 : g.y(j) - 0.5 * g.hy;
        const double hi = (j == ny - 1) ? g.y(j) : g.y(j) + 0.5 * g.hy;
        g.cell_weight_[j] = power_integral(a, lo, hi);
    }
    return g;
}

} // namespace fraclab
