#pragma once

#include <cmath>

namespace fraclab {

/// Truncated Taylor jet (value and first three derivatives) of a scalar
/// function of one variable. Used to evaluate the smooth obstacle blend and
/// its derivatives without hand-expanding third-order chain rules.
struct Jet3 {
    double v = 0.0;  // value
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
    static Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }

    Jet3 operator-() const { return {-v, -d1, -d2, -d3}; }

    friend Jet3 operator+(const Jet3& a, const Jet3& b) {
        return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
    }
    friend Jet3 operator-(const Jet3& a, const Jet3& b) {
        return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
    }
    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        return {a.v * b.v,
                a.d1 * b.v + a.v * b.d1,
                a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
                a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
    }
    friend Jet3 operator*(double c, const Jet3& a) { return {c * a.v, c * a.d1, c * a.d2, c * a.d3}; }
    friend Jet3 operator+(const Jet3& a, double c) { return {a.v + c, a.d1, a.d2, a.d3}; }
    friend Jet3 operator-(double c, const Jet3& a) { return {c - a.v, -a.d1, -a.d2, -a.d3}; }

    /// Reciprocal 1/a for a.v != 0.
    friend Jet3 recip(const Jet3& a) {
        const double r = 1.0 / a.v;
        const double r2 = r * r;
        const double d1 = -a.d1 * r2;
        const double d2 = (2.0 * a.d1 * a.d1 - a.v * a.d2) * r2 * r;
        const double d3 = (-a.d3 * a.v * a.v + 6.0 * a.d2 * a.d1 * a.v - 6.0 * a.d1 * a.d1 * a.d1) * r2 * r2;
        return {r, d1, d2, d3};
    }
    friend Jet3 operator/(const Jet3& a, const Jet3& b) { return a * recip(b); }

    friend Jet3 exp(const Jet3& a) {
        const double e = std::exp(a.v);
        return {e,
                a.d1 * e,
                (a.d2 + a.d1 * a.d1) * e,
                (a.d3 + 3.0 * a.d1 * a.d2 + a.d1 * a.d1 * a.d1) * e};
    }
};

} // namespace fraclab
