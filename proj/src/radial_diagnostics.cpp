#include "fraclab/radial_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fraclab/errors.hpp"
#include "fraclab/extrapolate.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int angular_nodes(const ExtensionGrid& g, double r, int density) {
    const int k = static_cast<int>(density * r / g.hx);
    return std::clamp(k, 32, 4096);
}

// Weighted surface integral of a pointwise functor over the full sphere of
// radius r (even integrand assumed): 2 r^{n+a} sum w f(point).
template <typename F>
double surface_integral(const CenteredField& cf, double r, const SphereRule& rule, F&& f) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        SpatialPoint p{cf.center[0] + r * rule.dir[q][0],
                       cf.grid.n == 2 ? cf.center[1] + r * rule.dir[q][1] : 0.0};
        const double y = r * rule.dir[q][2];
        acc += rule.w[q] * f(p, y, rule.dir[q]);
    }
    return 2.0 * std::pow(r, cf.grid.n + cf.grid.a) * acc;
}

double surface_H_rule(const CenteredField& cf, double r, const SphereRule& rule) {
    return surface_integral(cf, r, rule, [&cf](const SpatialPoint& p, double y, const auto&) {
        const double v = cf.value(p, y);
        return v * v;
    });
}

// Fraction of a grid cell inside the ball of radius r about (center, 0),
// estimated by midpoint subsampling when the sphere cuts the cell.
double cell_fraction_n1(const ExtensionGrid& g, const SpatialPoint& c, double r, double xlo,
                        double ylo) {
    const double hx = g.hx, hy = g.hy;
    const double cx = xlo + 0.5 * hx - c[0];
    const double cy = ylo + 0.5 * hy;
    const double dist = std::hypot(cx, cy);
    const double half_diag = 0.5 * std::hypot(hx, hy);
    if (dist + half_diag <= r) return 1.0;
    if (dist - half_diag >= r) return 0.0;
    int inside = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double px = xlo + (a + 0.5) * hx / 4.0 - c[0];
            const double py = ylo + (b + 0.5) * hy / 4.0;
            if (px * px + py * py <= r * r) ++inside;
        }
    return inside / 16.0;
}

double cell_fraction_n2(const ExtensionGrid& g, const SpatialPoint& c, double r, double x1lo,
                        double x2lo, double ylo) {
    const double hx = g.hx, hy = g.hy;
    const double c1 = x1lo + 0.5 * hx - c[0];
    const double c2 = x2lo + 0.5 * hx - c[1];
    const double cy = ylo + 0.5 * hy;
    const double dist = std::sqrt(c1 * c1 + c2 * c2 + cy * cy);
    const double half_diag = 0.5 * std::sqrt(2.0 * hx * hx + hy * hy);
    if (dist + half_diag <= r) return 1.0;
    if (dist - half_diag >= r) return 0.0;
    int inside = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int d = 0; d < 3; ++d) {
                const double p1 = x1lo + (a + 0.5) * hx / 3.0 - c[0];
                const double p2 = x2lo + (b + 0.5) * hx / 3.0 - c[1];
                const double py = ylo + (d + 0.5) * hy / 3.0;
                if (p1 * p1 + p2 * p2 + py * py <= r * r) ++inside;
            }
    return inside / 27.0;
}

struct BulkResult {
    double d = 0.0, g = 0.0;
    double d_alt = 0.0, g_alt = 0.0;  // corner-averaged variant, for error estimates
};

// Cell-wise quadrature over B_r: slab-exact weight in y, coverage fraction at
// the spherical boundary, centered-difference gradient at cell centers. The
// alt variant averages v^2 over corners instead of squaring the average.
BulkResult bulk_integrals(const CenteredField& cf, double r) {
    const ExtensionGrid& g = cf.grid;
    BulkResult out;
    const int jmax = std::min(g.ny - 2, static_cast<int>(std::ceil(r / g.hy)));

    if (g.n == 1) {
        const int ci = cf.center_node[0];
        const int span = static_cast<int>(std::ceil(r / g.hx)) + 1;
        const int ilo = std::max(0, ci - span), ihi = std::min(g.nx - 2, ci + span);
        for (int j = 0; j <= jmax; ++j) {
            const double wy = g.y_slab_weight(j);  // \int_slab t^a, exact
            const double ylo = g.y(j);
            for (int i = ilo; i <= ihi; ++i) {
                const double frac = cell_fraction_n1(g, cf.center, r, g.x(i), ylo);
                if (frac == 0.0) continue;
                const double v00 = cf.at(i, 0, j), v10 = cf.at(i + 1, 0, j);
                const double v01 = cf.at(i, 0, j + 1), v11 = cf.at(i + 1, 0, j + 1);
                const double vc = 0.25 * (v00 + v10 + v01 + v11);
                const double dx = (v10 + v11 - v00 - v01) / (2.0 * g.hx);
                const double dy = (v01 + v11 - v00 - v10) / (2.0 * g.hy);
                const double w = 2.0 * g.hx * wy * frac;  // both reflected halves
                out.g += w * vc * vc;
                out.d += w * (dx * dx + dy * dy);
                out.g_alt += w * 0.25 * (v00 * v00 + v10 * v10 + v01 * v01 + v11 * v11);
                out.d_alt += w * (dx * dx + dy * dy);
            }
        }
        return out;
    }

    const int c1 = cf.center_node[0], c2 = cf.center_node[1];
    const int span = static_cast<int>(std::ceil(r / g.hx)) + 1;
    const int lo1 = std::max(0, c1 - span), hi1 = std::min(g.nx - 2, c1 + span);
    const int lo2 = std::max(0, c2 - span), hi2 = std::min(g.nx - 2, c2 + span);
    for (int j = 0; j <= jmax; ++j) {
        const double wy = g.y_slab_weight(j);
        const double ylo = g.y(j);
        for (int i2 = lo2; i2 <= hi2; ++i2)
            for (int i1 = lo1; i1 <= hi1; ++i1) {
                const double frac = cell_fraction_n2(g, cf.center, r, g.x(i1), g.x(i2), ylo);
                if (frac == 0.0) continue;
                double corner[2][2][2];
                for (int dj = 0; dj < 2; ++dj)
                    for (int b = 0; b < 2; ++b)
                        for (int a = 0; a < 2; ++a)
                            corner[dj][b][a] = cf.at(i1 + a, i2 + b, j + dj);
                double vc = 0.0, sq = 0.0;
                for (int dj = 0; dj < 2; ++dj)
                    for (int b = 0; b < 2; ++b)
                        for (int a = 0; a < 2; ++a) {
                            vc += corner[dj][b][a];
                            sq += corner[dj][b][a] * corner[dj][b][a];
                        }
                vc /= 8.0;
                sq /= 8.0;
                const double d1 = (corner[0][0][1] + corner[0][1][1] + corner[1][0][1] +
                                   corner[1][1][1] - corner[0][0][0] - corner[0][1][0] -
                                   corner[1][0][0] - corner[1][1][0]) /
                                  (4.0 * g.hx);
                const double d2 = (corner[0][1][0] + corner[0][1][1] + corner[1][1][0] +
                                   corner[1][1][1] - corner[0][0][0] - corner[0][0][1] -
                                   corner[1][0][0] - corner[1][0][1]) /
                                  (4.0 * g.hx);
                const double dy = (corner[1][0][0] + corner[1][0][1] + corner[1][1][0] +
                                   corner[1][1][1] - corner[0][0][0] - corner[0][0][1] -
                                   corner[0][1][0] - corner[0][1][1]) /
                                  (4.0 * g.hy);
                const double w = 2.0 * g.hx * g.hx * wy * frac;
                const double gsq = d1 * d1 + d2 * d2 + dy * dy;
                out.g += w * vc * vc;
                out.d += w * gsq;
                out.g_alt += w * sq;
                out.d_alt += w * gsq;
            }
    }
    return out;
}

// <v, L_a v> over the ball via the discrete operator, with reflection
// multiplicities. Nodes outside the ball or on the Dirichlet boundary are
// excluded.
double bulk_pairing(const CenteredField& cf, double r, const DiscreteOperator& op) {
    const ExtensionGrid& g = cf.grid;
    const int n2 = g.n == 2 ? g.nx : 1;
    const int jmax = std::min(g.ny - 2, static_cast<int>(r / g.hy) + 1);
    double acc = 0.0;
    for (int j = 0; j <= jmax; ++j) {
        const double y = g.y(j);
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                if (g.is_boundary(i1, i2, j)) continue;
                const double dx1 = g.x(i1) - cf.center[0];
                const double dx2 = g.n == 2 ? g.x(i2) - cf.center[1] : 0.0;
                if (dx1 * dx1 + dx2 * dx2 + y * y > r * r) continue;
                acc += op.reflection_mult(j) * cf.at(i1, i2, j) *
                       op.residual_at(cf.values, i1, i2, j);
            }
    }
    return acc;
}

void check_radius(const CenteredField& cf, double r) {
    const ExtensionGrid& g = cf.grid;
    const double margin = 1.001 * std::max(g.hx, g.hy);
    double dist = std::min(g.x_box - std::abs(cf.center[0]), g.y_max);
    if (g.n == 2) dist = std::min(dist, g.x_box - std::abs(cf.center[1]));
    if (r + margin > dist)
        throw std::invalid_argument("radius " + std::to_string(r) +
                                    " exceeds the domain around the center");
}

} // namespace

double surface_H(const CenteredField& cf, double r, int quad_density) {
    check_radius(cf, r);
    const SphereRule rule = make_sphere_rule(cf.grid.n, cf.grid.a,
                                             angular_nodes(cf.grid, r, quad_density));
    return surface_H_rule(cf, r, rule);
}

double bulk_D(const CenteredField& cf, double r) {
    check_radius(cf, r);
    return bulk_integrals(cf, r).d;
}

double bulk_G(const CenteredField& cf, double r) {
    check_radius(cf, r);
    return bulk_integrals(cf, r).g;
}

FluxPair flux_I(const CenteredField& cf, double r, const DiscreteOperator& op,
                int quad_density) {
    check_radius(cf, r);
    const SphereRule rule = make_sphere_rule(cf.grid.n, cf.grid.a,
                                             angular_nodes(cf.grid, r, quad_density));
    FluxPair out;
    out.surface = surface_integral(
        cf, r, rule, [&cf](const SpatialPoint& p, double y, const std::array<double, 3>& dir) {
            double v, grad[3];
            cf.value_gradient(p, y, v, grad);
            const double vnu = grad[0] * dir[0] + grad[1] * dir[1] + grad[2] * dir[2];
            return v * vnu;
        });
    out.volume = bulk_integrals(cf, r).d - bulk_pairing(cf, r, op);
    return out;
}

double frequency_N(const CenteredField& cf, double r, int quad_density) {
    const double h = surface_H(cf, r, quad_density);
    if (h < 1e-280)
        throw DegenerateH("H(r) below machine floor at r = " + std::to_string(r));
    return r * bulk_D(cf, r) / h;
}

double weiss_W(const RadialDiagnostics& diag, std::size_t k) {
    const double r = diag.r[k];
    const double e = diag.n + diag.a;
    return diag.D[k] / std::pow(r, e + 3.0) - 2.0 * diag.H[k] / std::pow(r, e + 4.0);
}

double monneau_M(const CenteredField& cf, const QuadraticBlowup& q, double r, int quad_density) {
    check_radius(cf, r);
    const SphereRule rule = make_sphere_rule(cf.grid.n, cf.grid.a,
                                             angular_nodes(cf.grid, r, quad_density));
    const double num = surface_integral(
        cf, r, rule, [&cf, &q](const SpatialPoint& p, double y, const auto&) {
            SpatialPoint rel{p[0] - cf.center[0],
                             cf.grid.n == 2 ? p[1] - cf.center[1] : 0.0};
            const double gap = cf.value(p, y) - q.eval(rel, y);
            return gap * gap;
        });
    return num / std::pow(r, cf.grid.n + cf.grid.a + 4.0);
}

std::vector<double> monneau_ladder(const CenteredField& cf, const QuadraticBlowup& q,
                                   std::span<const double> radii, int quad_density) {
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) out.push_back(monneau_M(cf, q, r, quad_density));
    return out;
}

double truncated_Phi(const RadialDiagnostics& diag, std::size_t k, double c0) {
    if (diag.size() < 3)
        throw std::invalid_argument("truncated_Phi: need at least 3 ladder points");
    if (k == 0 || k + 1 >= diag.size()) return kNaN;
    const double r = diag.r[k];
    const double power_exp = diag.n + diag.a + 4.0 + 2.0 * diag.config.gamma;
    if (diag.H[k] <= std::pow(r, power_exp))
        return (1.0 + c0 * r) * power_exp;  // power branch, exact
    const double slope = ladder_log_slope(diag.r, diag.H, k);
    return (1.0 + c0 * r) * slope;
}

std::vector<double> phi_ladder(const RadialDiagnostics& diag, double c0) {
    std::vector<double> out(diag.size(), kNaN);
    for (std::size_t k = 1; k + 1 < diag.size(); ++k) out[k] = truncated_Phi(diag, k, c0);
    return out;
}

std::vector<double> phi_slack_ladder(const RadialDiagnostics& diag, double c0,
                                     double slack_mult) {
    std::vector<double> out(diag.size(), kNaN);
    for (std::size_t k = 1; k + 1 < diag.size(); ++k) {
        const double rel = diag.H_err[k - 1] / std::max(diag.H[k - 1], 1e-300) +
                           diag.H_err[k + 1] / std::max(diag.H[k + 1], 1e-300);
        const double dlog = std::log(diag.r[k - 1]) - std::log(diag.r[k + 1]);
        out[k] = slack_mult * (1.0 + c0 * diag.r[k]) * rel / dlog;
    }
    return out;
}

bool phi_nondecreasing(const RadialDiagnostics& diag, double c0, double slack_mult) {
    const std::vector<double> phi = phi_ladder(diag, c0);
    const std::vector<double> slack = phi_slack_ladder(diag, c0, slack_mult);
    for (std::size_t k = 1; k + 2 < diag.size(); ++k) {
        // radii descend: Phi at the smaller radius must not exceed Phi at the
        // larger one beyond the combined slack.
        if (phi[k + 1] > phi[k] + slack[k] + slack[k + 1]) return false;
    }
    return true;
}

double calibrate_c0(std::span<const RadialDiagnostics> tables, double slack_mult) {
    for (double c0 = 1.0; c0 <= 64.0; c0 *= 2.0) {
        bool ok = true;
        for (const RadialDiagnostics& t : tables)
            if (!phi_nondecreasing(t, c0, slack_mult)) {
                ok = false;
                break;
            }
        if (ok) return c0;
    }
    return 64.0;
}

std::vector<double> radius_ladder(const ExtensionGrid& grid, const SpatialPoint& center,
                                  const DiagnosticsConfig& cfg) {
    double dist = std::min(grid.x_box - std::abs(center[0]), grid.y_max);
    if (grid.n == 2) dist = std::min(dist, grid.x_box - std::abs(center[1]));
    double r = std::min(cfg.r_hat, dist - 2.0 * std::max(grid.hx, grid.hy));
    std::vector<double> out;
    const double r_min = cfg.min_cells * grid.hx;
    while (r >= r_min) {
        out.push_back(r);
        r /= cfg.ladder_ratio;
    }
    return out;
}

RadialDiagnostics compute_radial_diagnostics(const CenteredField& cf,
                                             const DiagnosticsConfig& cfg,
                                             const DiscreteOperator* op) {
    RadialDiagnostics diag;
    diag.n = cf.grid.n;
    diag.a = cf.grid.a;
    diag.center = cf.center;
    diag.config = cfg;
    diag.r = radius_ladder(cf.grid, cf.center, cfg);

    const std::size_t m = diag.r.size();
    diag.H.resize(m);
    diag.H_err.resize(m);
    diag.G.resize(m);
    diag.G_err.resize(m);
    diag.D.resize(m);
    diag.D_err.resize(m);
    diag.I_surface.assign(m, kNaN);
    diag.I_volume.assign(m, kNaN);
    diag.N.resize(m);
    diag.W.resize(m);
    diag.d_r.resize(m);

    for (std::size_t k = 0; k < m; ++k) {
        const double r = diag.r[k];
        const int nodes = angular_nodes(cf.grid, r, cfg.quad_density);
        const SphereRule rule = make_sphere_rule(cf.grid.n, cf.grid.a, nodes);
        const SphereRule half = make_sphere_rule(cf.grid.n, cf.grid.a, nodes / 2);

        diag.H[k] = surface_H_rule(cf, r, rule);
        diag.H_err[k] = std::abs(diag.H[k] - surface_H_rule(cf, r, half));

        const BulkResult bulk = bulk_integrals(cf, r);
        diag.G[k] = bulk.g;
        diag.G_err[k] = std::abs(bulk.g - bulk.g_alt);
        diag.D[k] = bulk.d;
        diag.D_err[k] = std::abs(bulk.d - bulk.d_alt);

        if (op) {
            FluxPair fp;
            fp.surface = surface_integral(
                cf, r, rule, [&cf](const SpatialPoint& p, double y, const std::array<double, 3>& dir) {
                    double v, grad[3];
                    cf.value_gradient(p, y, v, grad);
                    return v * (grad[0] * dir[0] + grad[1] * dir[1] + grad[2] * dir[2]);
                });
            fp.volume = bulk.d - bulk_pairing(cf, r, *op);
            diag.I_surface[k] = fp.surface;
            diag.I_volume[k] = fp.volume;
        }

        diag.N[k] = diag.H[k] > 1e-280 ? r * diag.D[k] / diag.H[k] : kNaN;
        diag.W[k] = weiss_W(diag, k);
        diag.d_r[k] = std::sqrt(std::max(0.0, diag.H[k]) / std::pow(r, diag.n + diag.a));
    }

    diag.Phi = phi_ladder(diag, cfg.c0_freq);
    diag.phi_slack = phi_slack_ladder(diag, cfg.c0_freq);
    return diag;
}

NondegeneracyScan nondegeneracy_scan(const SolutionField& field, const ObstacleSpec& obstacle,
                                     const SpatialPoint& x0, std::span<const double> radii) {
    const ExtensionGrid& g = field.grid;
    NondegeneracyScan scan;
    scan.resolved = !radii.empty();
    CenteredField cf = build_v(field, obstacle, x0);

    const int n2 = g.n == 2 ? g.nx : 1;
    for (double r : radii) {
        if (r < 4.0 * g.hx) {
            scan.resolved = false;
            continue;
        }
        double sup = 0.0;
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                const double dx1 = g.x(i1) - cf.center[0];
                const double dx2 = g.n == 2 ? g.x(i2) - cf.center[1] : 0.0;
                if (dx1 * dx1 + dx2 * dx2 > r * r) continue;
                SpatialPoint p{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};
                sup = std::max(sup, field.trace(i1, i2) - obstacle.eval_phi(p));
            }
        scan.r.push_back(r);
        scan.c1.push_back(sup / (r * r));
        scan.c2.push_back(bulk_G(cf, r) / std::pow(r, g.n + g.a + 5.0));
    }
    if (!scan.r.empty()) {
        scan.c1_hat = *std::min_element(scan.c1.begin(), scan.c1.end());
        scan.c2_hat = *std::min_element(scan.c2.begin(), scan.c2.end());
    } else {
        scan.resolved = false;
    }
    return scan;
}

} // namespace fraclab
