#pragma once

#include <array>

#include "fraclab/obstacle.hpp"

namespace fraclab {

/// Even 2-homogeneous quadratic  p2(x,y) = <A x, x> - b y^2  with symmetric
/// A >= 0 and b = trace(A)/(1+a), the unique y^2-coefficient annihilated by
/// the weighted extension operator.
struct QuadraticBlowup {
    int n = 1;
    // Symmetric matrix entries; a12 unused for n = 1.
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
    double b = 0.0;

    static QuadraticBlowup from_matrix(int n, double a11, double a12, double a22, double weight_a);

    /// The model profile P(x,y) = |x|^2 - lambda |y|^2, lambda = n/(1+a).
    static QuadraticBlowup model_profile(int n, double weight_a);

    double trace() const { return n == 1 ? a11 : a11 + a22; }

    /// Eigenvalues of A, ascending; second entry unused for n = 1.
    std::array<double, 2> eigenvalues() const;

    double eval(const SpatialPoint& x, double y) const {
        const double q = n == 1 ? a11 * x[0] * x[0]
                                : a11 * x[0] * x[0] + 2.0 * a12 * x[0] * x[1] + a22 * x[1] * x[1];
        return q - b * y * y;
    }

    /// Trace polynomial <A x, x>.
    double eval_trace(const SpatialPoint& x) const { return eval(x, 0.0); }
};

inline double eval_p2(const QuadraticBlowup& q, const SpatialPoint& x, double y) {
    return q.eval(x, y);
}

/// Weighted L2 distance of two quadratics over the unit sphere:
///   \int_{dB_1} |y|^a (p - q)^2.
double quadratic_sphere_distance(const QuadraticBlowup& p, const QuadraticBlowup& q, double a);

} // namespace fraclab
