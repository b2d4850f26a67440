#include "fraclab/quadratic.hpp"

#include <cmath>
#include <stdexcept>

#include "fraclab/quadrature.hpp"

namespace fraclab {

QuadraticBlowup QuadraticBlowup::from_matrix(int n, double a11, double a12, double a22,
                                             double weight_a) {
    if (n != 1 && n != 2) throw std::invalid_argument("QuadraticBlowup: n must be 1 or 2");
    QuadraticBlowup q;
    q.n = n;
    q.a11 = a11;
    q.a12 = n == 2 ? a12 : 0.0;
    q.a22 = n == 2 ? a22 : 0.0;
    q.b = q.trace() / (1.0 + weight_a);
    return q;
}

QuadraticBlowup QuadraticBlowup::model_profile(int n, double weight_a) {
    return from_matrix(n, 1.0, 0.0, n == 2 ? 1.0 : 0.0, weight_a);
}

std::array<double, 2> QuadraticBlowup::eigenvalues() const {
    if (n == 1) return {a11, 0.0};
    const double tr = a11 + a22;
    const double det = a11 * a22 - a12 * a12;
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

double quadratic_sphere_distance(const QuadraticBlowup& p, const QuadraticBlowup& q, double a) {
    const SphereRule rule = make_sphere_rule(p.n, a, 512);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const SpatialPoint x{rule.dir[k][0], rule.dir[k][1]};
        const double y = rule.dir[k][2];
        const double gap = p.eval(x, y) - q.eval(x, y);
        acc += rule.w[k] * gap * gap;
    }
    return 2.0 * acc;  // even integrand: both hemispheres
}

} // namespace fraclab
