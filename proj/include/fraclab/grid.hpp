#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fraclab {

/// Tensor grid for the (n+1)-dimensional extension box
///   [-x_box, x_box]^n  x  [0, y_max],
/// with the degenerate weight |y|^a, a = 1 - 2s, baked into precomputed face
/// quantities. Only the upper half in y is stored; every consumer treats the
/// field as even in y.
///
/// The y-direction flux coefficient between node layers j and j+1 is the
/// exact steady-flux transmissibility
///   T_{j+1/2} = ( \int_{y_j}^{y_{j+1}} t^{-a} dt )^{-1},
/// finite for all a < 1. The x-direction uses exact cell integrals of t^a
/// over the y-cell of each node row. Both are exact antiderivatives, so the
/// weight is never sampled pointwise at y = 0.
class ExtensionGrid {
public:
    int n = 1;            // spatial dimension (1 or 2)
    double s = 0.5;       // fractional order in (0,1)
    double a = 0.0;       // weight exponent, a = 1 - 2s
    double x_box = 1.0;   // half-width per spatial axis
    double y_max = 1.0;   // extension height
    int nx = 0;           // nodes per spatial axis
    int ny = 0;           // nodes in y (y = 0 included as layer j = 0)
    double hx = 0.0;
    double hy = 0.0;

    double x(int i) const { return -x_box + i * hx; }
    double y(int j) const { return j * hy; }

    /// Exact y-face transmissibility between layers j and j+1 (per unit
    /// cross-sectional area). Equals 1/hy when a = 0.
    double y_face_transmissibility(int j) const { return face_transmissibility_[j]; }

    /// \int_{cell_j} t^a dt over the node-centered y-cell of row j:
    /// [0, hy/2] for j = 0, [y_j - hy/2, y_j + hy/2] inside, clamped at the top.
    double y_cell_weight(int j) const { return cell_weight_[j]; }

    /// \int_{y_j}^{y_{j+1}} t^a dt over the slab between node layers.
    double y_slab_weight(int j) const { return slab_weight_[j]; }

    std::size_t num_nodes() const {
        std::size_t t = num_trace_nodes();
        return t * static_cast<std::size_t>(ny);
    }
    std::size_t num_trace_nodes() const {
        std::size_t m = static_cast<std::size_t>(nx);
        return n == 1 ? m : m * m;
    }

    /// Flat node index; i2 is ignored for n = 1. Layout is y-major, then x2,
    /// then x1 fastest.
    std::size_t node(int i1, int i2, int j) const {
        if (n == 1) return static_cast<std::size_t>(j) * nx + i1;
        return (static_cast<std::size_t>(j) * nx + i2) * nx + i1;
    }
    std::size_t trace_node(int i1, int i2) const { return node(i1, i2, 0); }

    bool is_lateral_boundary(int i1, int i2) const {
        if (i1 == 0 || i1 == nx - 1) return true;
        return n == 2 && (i2 == 0 || i2 == nx - 1);
    }
    /// Dirichlet nodes: lateral box faces and the top layer y = y_max.
    bool is_boundary(int i1, int i2, int j) const {
        return j == ny - 1 || is_lateral_boundary(i1, i2);
    }

private:
    friend ExtensionGrid build_grid(int n, double s, double x_box, double y_max, int nx, int ny);
    std::vector<double> face_transmissibility_;  // size ny-1
    std::vector<double> cell_weight_;            // size ny
    std::vector<double> slab_weight_;            // size ny-1
};

/// Validates parameters and precomputes the weighted face quantities.
/// Rejects s outside (0,1), even or too-small node counts, and non-positive
/// extents.
ExtensionGrid build_grid(int n, double s, double x_box, double y_max, int nx, int ny);

/// \int_alpha^beta t^p dt for p > -1, 0 <= alpha < beta.
double power_integral(double p, double alpha, double beta);

} // namespace fraclab
