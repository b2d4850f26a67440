#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab {

namespace {

// Symmetric graded map [0,1] -> [0,1]: g(u) = u^p / (u^p + (1-u)^p).
// Near u = 0, g ~ u^p, which turns an endpoint singularity t^alpha
// (alpha > -1) into u^{p(1+alpha)-1}; p is chosen so the composite midpoint
// rule regains second-order behavior.
double graded(double u, double p) {
    const double up = std::pow(u, p);
    const double vp = std::pow(1.0 - u, p);
    return up / (up + vp);
}

double graded_deriv(double u, double p) {
    const double up = std::pow(u, p);
    const double vp = std::pow(1.0 - u, p);
    const double den = up + vp;
    return p * std::pow(u, p - 1.0) * std::pow(1.0 - u, p - 1.0) / (den * den);
}

double grading_exponent(double a) {
    // Want p*(1+a) >= 3 with margin; a in (-1,1).
    return std::max(4.0, 3.5 / (1.0 + a));
}

} // namespace

SphereRule make_sphere_rule(int n, double a, int K) {
    K = std::max(K, 16);
    SphereRule rule;

    if (n == 1) {
        // Arc {y >= 0} of the unit circle: \int_0^pi sin^a(th) f dth,
        // th graded toward both poles where sin^a is singular or vanishes.
        const double p = grading_exponent(a);
        rule.dir.reserve(K);
        rule.w.reserve(K);
        for (int q = 0; q < K; ++q) {
            const double u = (q + 0.5) / K;
            const double th = M_PI * graded(u, p);
            const double dth = M_PI * graded_deriv(u, p) / K;
            const double sth = std::sin(th);
            rule.dir.push_back({std::cos(th), 0.0, sth});
            rule.w.push_back(std::pow(sth, a) * dth);
        }
        return rule;
    }

    // n = 2: upper half of S^2. With y = cos(th), th in [0, pi/2):
    //   \int_0^{pi/2} \int_0^{2pi} cos^a(th) sin(th) f dpsi dth.
    // The weight is singular at th = pi/2 (the trace plane), so grade there.
    const double p = grading_exponent(a);
    const int Kth = std::max(K / 2, 12);
    const int Kpsi = K;
    rule.dir.reserve(static_cast<std::size_t>(Kth) * Kpsi);
    rule.w.reserve(static_cast<std::size_t>(Kth) * Kpsi);
    for (int q = 0; q < Kth; ++q) {
        const double u = (q + 0.5) / Kth;
        // th = (pi/2) * g(u) with grading at u = 1 only; reuse the symmetric
        // map, whose u->1 branch provides the clustering we need.
        const double th = 0.5 * M_PI * graded(u, p);
        const double dth = 0.5 * M_PI * graded_deriv(u, p) / Kth;
        const double cth = std::cos(th), sth = std::sin(th);
        const double wth = std::pow(cth, a) * sth * dth;
        for (int m = 0; m < Kpsi; ++m) {
            const double psi = 2.0 * M_PI * (m + 0.5) / Kpsi;
            rule.dir.push_back({sth * std::cos(psi), sth * std::sin(psi), cth});
            rule.w.push_back(wth * 2.0 * M_PI / Kpsi);
        }
    }
    return rule;
}

} // namespace fraclab
