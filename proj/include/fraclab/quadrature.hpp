#pragma once

#include <array>
#include <vector>

namespace fraclab {

/// Angular rule for weighted sphere integrals in the extension space.
/// Directions are unit vectors (d1, d2, dy) on the half {y >= 0}; weights
/// satisfy
///   sum_q w_q f(dir_q)  ~=  \int_{S^n ∩ {y>=0}} |y|^a f dS   on the unit sphere.
/// Full-sphere integrals of y-even integrands are twice the half sum.
///
/// Composite midpoint in angle with a polynomial grading toward the angles
/// where |y|^a is singular, so the rule converges for all a in (-1,1). Poles
/// are never hit exactly.
struct SphereRule {
    std::vector<std::array<double, 3>> dir;
    std::vector<double> w;
    std::size_t size() const { return dir.size(); }
};

/// Builds the rule for dimension n (sphere S^n in R^{n+1}) and weight
/// exponent a. K controls the angular resolution (nodes per angle).
SphereRule make_sphere_rule(int n, double a, int K);

} // namespace fraclab
