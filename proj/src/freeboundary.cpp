#include "fraclab/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fraclab/extrapolate.hpp"

namespace fraclab {

std::size_t ContactMasks::contact_count() const {
    return std::count(contact.begin(), contact.end(), std::uint8_t{1});
}
std::size_t ContactMasks::fb_count() const {
    return std::count(fb.begin(), fb.end(), std::uint8_t{1});
}

ContactMasks extract_contact_and_boundary(const SolutionField& field,
                                          const ObstacleSpec& obstacle, double contact_tol) {
    const ExtensionGrid& g = field.grid;
    ContactMasks m;
    m.n = g.n;
    m.nx = g.nx;
    m.contact_tol = contact_tol;
    m.contact.assign(g.num_trace_nodes(), 0);
    m.fb.assign(g.num_trace_nodes(), 0);

    const int n2 = g.n == 2 ? g.nx : 1;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            SpatialPoint p{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};
            if (field.trace(i1, i2) - obstacle.eval_phi(p) <= contact_tol)
                m.contact[g.trace_node(i1, i2)] = 1;
        }

    auto contact_at = [&](int i1, int i2) {
        if (i1 < 0 || i1 >= g.nx || i2 < 0 || i2 >= n2) return false;
        return m.contact[g.trace_node(i1, i2)] != 0;
    };
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            if (!contact_at(i1, i2)) continue;
            bool open_neighbor = !contact_at(i1 - 1, i2) || !contact_at(i1 + 1, i2);
            if (g.n == 2)
                open_neighbor = open_neighbor || !contact_at(i1, i2 - 1) || !contact_at(i1, i2 + 1);
            if (open_neighbor) m.fb[g.trace_node(i1, i2)] = 1;
        }
    return m;
}

double density_ratio(const ContactMasks& masks, const ExtensionGrid& grid,
                     const SpatialPoint& x0, double r) {
    const int n2 = grid.n == 2 ? grid.nx : 1;
    std::size_t total = 0, hit = 0;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < grid.nx; ++i1) {
            const double d1 = grid.x(i1) - x0[0];
            const double d2 = grid.n == 2 ? grid.x(i2) - x0[1] : 0.0;
            if (d1 * d1 + d2 * d2 > r * r) continue;
            ++total;
            if (masks.is_contact(i1, i2)) ++hit;
        }
    return total == 0 ? 0.0 : static_cast<double>(hit) / total;
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Regular: return "regular";
        case PointClass::Singular: return "singular";
        default: return "unresolved";
    }
}

FreeBoundaryPoint classify_point(int id, const SpatialPoint& x, const RadialDiagnostics& diag,
                                 const std::vector<double>& density, double s,
                                 const ClassifyConfig& cfg) {
    FreeBoundaryPoint pt;
    pt.id = id;
    pt.x = x;

    if (diag.size() < 4) {
        pt.cls = PointClass::Unresolved;
        return pt;
    }

    // Noise floors from the per-radius quadrature error estimates.
    const std::size_t last = diag.size() - 1;
    const double rel_noise = diag.H_err[last] / std::max(diag.H[last], 1e-300) +
                             diag.D_err[last] / std::max(diag.D[last], 1e-300);
    const LimitEstimate n_lim =
        extrapolate_to_zero(diag.r, diag.N, std::abs(diag.N[last]) * rel_noise);
    pt.m_hat = n_lim.value;
    pt.m_unc = n_lim.uncertainty;

    // Phi ladder is defined on the interior indices only.
    std::vector<double> pr(diag.r.begin() + 1, diag.r.end() - 1);
    std::vector<double> pv(diag.Phi.begin() + 1, diag.Phi.end() - 1);
    if (pv.size() >= 2) {
        const LimitEstimate p_lim = extrapolate_to_zero(pr, pv, 2.0 * rel_noise);
        pt.phi_limit = p_lim.value;
        pt.phi_unc = p_lim.uncertainty;
    } else {
        pt.phi_limit = diag.n + diag.a + 2.0 * pt.m_hat;
        pt.phi_unc = 2.0 * pt.m_unc;
    }

    pt.density_small_r = density.empty() ? 0.0 : density.back();

    // Nearest admissible homogeneity; intermediate values stay unresolved.
    const double d_reg = std::abs(pt.m_hat - (1.0 + s));
    const double d_sing = std::abs(pt.m_hat - 2.0);
    if (d_reg <= cfg.class_tol && d_reg <= d_sing) {
        pt.cls = PointClass::Regular;
    } else if (d_sing <= cfg.class_tol) {
        // Singular requires the contact density to trend to zero.
        bool density_ok = !density.empty() &&
                          density.back() <= cfg.density_singular_max &&
                          density.back() <= density.front() + cfg.density_trend_slack;
        pt.cls = density_ok ? PointClass::Singular : PointClass::Unresolved;
    } else {
        pt.cls = PointClass::Unresolved;
    }
    return pt;
}

namespace {

// Solves the 3x3 normal equations by Gaussian elimination with partial
// pivoting; returns false on rank deficiency.
bool solve3(double m[3][4]) {
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        if (std::abs(m[p][c]) < 1e-14) return false;
        std::swap(m[p], m[c]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    for (int c = 0; c < 3; ++c) m[c][3] /= m[c][c];
    return true;
}

} // namespace

P2Fit fit_p2(const CenteredField& cf, double r_fit) {
    const ExtensionGrid& g = cf.grid;
    const double a = g.a;

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double r_lo = attempt == 0 ? 0.5 * r_fit : 0.25 * r_fit;

        if (g.n == 1) {
            double num = 0.0, den = 0.0;
            int count = 0;
            for (int i = 0; i < g.nx; ++i) {
                const double t = g.x(i) - cf.center[0];
                const double at = std::abs(t);
                if (at < r_lo || at > r_fit) continue;
                const double v = cf.at(i, 0, 0);
                num += v * t * t;
                den += t * t * t * t;
                ++count;
            }
            if (count < 2) continue;
            double a11 = std::max(0.0, num / den);  // PSD clip
            P2Fit fit;
            fit.q = QuadraticBlowup::from_matrix(1, a11, 0.0, 0.0, a);
            double ss = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                const double t = g.x(i) - cf.center[0];
                const double at = std::abs(t);
                if (at < r_lo || at > r_fit) continue;
                const double e = cf.at(i, 0, 0) - a11 * t * t;
                ss += e * e;
            }
            fit.residual = std::sqrt(ss / count) / (r_fit * r_fit);
            return fit;
        }

        // n = 2: basis {t1^2, 2 t1 t2, t2^2}
        double m[3][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
        int count = 0;
        for (int i2 = 0; i2 < g.nx; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                const double t1 = g.x(i1) - cf.center[0];
                const double t2 = g.x(i2) - cf.center[1];
                const double rr = std::hypot(t1, t2);
                if (rr < r_lo || rr > r_fit) continue;
                const double b0 = t1 * t1, b1 = 2.0 * t1 * t2, b2 = t2 * t2;
                const double v = cf.at(i1, i2, 0);
                const double basis[3] = {b0, b1, b2};
                for (int rI = 0; rI < 3; ++rI) {
                    for (int cI = 0; cI < 3; ++cI) m[rI][cI] += basis[rI] * basis[cI];
                    m[rI][3] += basis[rI] * v;
                }
                ++count;
            }
        if (count < 6 || !solve3(m)) continue;
        double a11 = m[0][3], a12 = m[1][3], a22 = m[2][3];

        // Project the symmetric part onto the PSD cone.
        const double tr = a11 + a22;
        const double det = a11 * a22 - a12 * a12;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        double l0 = 0.5 * tr - disc, l1 = 0.5 * tr + disc;
        if (l0 < 0.0 || l1 < 0.0) {
            // eigenvectors of the 2x2 symmetric matrix
            double vx, vy;
            if (std::abs(a12) > 1e-300) {
                vx = l1 - a22;
                vy = a12;
            } else {
                vx = a11 >= a22 ? 1.0 : 0.0;
                vy = a11 >= a22 ? 0.0 : 1.0;
            }
            const double nrm = std::hypot(vx, vy);
            vx /= nrm;
            vy /= nrm;
            l0 = std::max(0.0, l0);
            l1 = std::max(0.0, l1);
            a11 = l1 * vx * vx + l0 * vy * vy;
            a12 = l1 * vx * vy - l0 * vx * vy;
            a22 = l1 * vy * vy + l0 * vx * vx;
        }

        P2Fit fit;
        fit.q = QuadraticBlowup::from_matrix(2, a11, a12, a22, a);
        double ss = 0.0;
        int cnt2 = 0;
        for (int i2 = 0; i2 < g.nx; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                const double t1 = g.x(i1) - cf.center[0];
                const double t2 = g.x(i2) - cf.center[1];
                const double rr = std::hypot(t1, t2);
                if (rr < r_lo || rr > r_fit) continue;
                const double e = cf.at(i1, i2, 0) - fit.q.eval_trace({t1, t2});
                ss += e * e;
                ++cnt2;
            }
        fit.residual = std::sqrt(ss / cnt2) / (r_fit * r_fit);
        return fit;
    }
    throw std::invalid_argument("fit_p2: annulus too thin (rank-deficient normal equations)");
}

ContinuityTable continuity_check(const FreeBoundaryReport& report, double a) {
    ContinuityTable table;
    std::vector<const AnalyzedPoint*> singular;
    for (const AnalyzedPoint& ap : report.points)
        if (ap.point.cls == PointClass::Singular && ap.point.p2) singular.push_back(&ap);

    for (std::size_t i = 0; i < singular.size(); ++i)
        for (std::size_t j = i + 1; j < singular.size(); ++j) {
            ContinuityRow row;
            row.id_a = singular[i]->point.id;
            row.id_b = singular[j]->point.id;
            const auto& xa = singular[i]->point.x;
            const auto& xb = singular[j]->point.x;
            row.separation = std::hypot(xa[0] - xb[0], xa[1] - xb[1]);
            row.distance =
                quadratic_sphere_distance(*singular[i]->point.p2, *singular[j]->point.p2, a);
            table.rows.push_back(row);
        }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const ContinuityRow& p, const ContinuityRow& q) {
                  return p.separation < q.separation;
              });
    double running = 0.0;
    for (const ContinuityRow& row : table.rows) {
        running = std::max(running, row.distance);
        table.envelope.push_back(running);
    }
    return table;
}

int stratum_of(const QuadraticBlowup& q, double kernel_tol) {
    const int dim = q.n;
    const auto eig = q.eigenvalues();
    double lmax = std::abs(eig[0]);
    if (dim == 2) lmax = std::max(lmax, std::abs(eig[1]));
    if (lmax < 1e-12) return -1;  // A ~ 0, inconsistent with membership in P2
    int k = 0;
    for (int e = 0; e < dim; ++e)
        if (eig[e] < kernel_tol * lmax) ++k;
    return k >= dim ? -1 : k;
}

void stratify(FreeBoundaryReport& report, double kernel_tol) {
    for (AnalyzedPoint& ap : report.points) {
        FreeBoundaryPoint& pt = ap.point;
        if (pt.cls != PointClass::Singular || !pt.p2) continue;
        const int k = stratum_of(*pt.p2, kernel_tol);
        if (k < 0) {
            pt.degenerate_fit = true;
            pt.stratum.reset();
        } else {
            pt.stratum = k;
        }
    }
}

FreeBoundaryReport analyze_free_boundary(const SolutionField& field,
                                         const ObstacleSpec& obstacle,
                                         const DiagnosticsConfig& diag_cfg,
                                         const ClassifyConfig& cls_cfg,
                                         const DiscreteOperator& op, double contact_tol) {
    const ExtensionGrid& g = field.grid;
    FreeBoundaryReport report;
    report.masks = extract_contact_and_boundary(field, obstacle, contact_tol);
    report.c0_freq_used = diag_cfg.c0_freq;

    const int n2 = g.n == 2 ? g.nx : 1;
    int id = 0;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            if (!report.masks.is_fb(i1, i2)) continue;
            SpatialPoint x0{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};

            AnalyzedPoint ap;
            CenteredField cf = build_v(field, obstacle, x0);
            ap.diag = compute_radial_diagnostics(cf, diag_cfg, &op);
            for (double r : ap.diag.r)
                ap.density.push_back(density_ratio(report.masks, g, x0, r));

            ap.point = classify_point(id, x0, ap.diag, ap.density, g.s, cls_cfg);

            if (!ap.diag.r.empty()) {
                NondegeneracyScan scan = nondegeneracy_scan(field, obstacle, x0, ap.diag.r);
                ap.point.c1_hat = scan.c1_hat;
                ap.point.c2_hat = scan.c2_hat;
                ap.point.nondeg_resolved = scan.resolved;
            }

            if (ap.point.cls == PointClass::Singular && ap.diag.size() >= 2) {
                const double r_fit =
                    std::clamp(8.0 * g.hx, ap.diag.r.back(), ap.diag.r.front());
                try {
                    P2Fit fit = fit_p2(cf, r_fit);
                    ap.point.p2 = fit.q;
                    ap.point.fit_residual = fit.residual;
                } catch (const std::invalid_argument&) {
                    ap.point.degenerate_fit = true;
                }
            }

            report.points.push_back(std::move(ap));
            ++id;
        }

    for (const AnalyzedPoint& ap : report.points) {
        switch (ap.point.cls) {
            case PointClass::Regular: ++report.n_regular; break;
            case PointClass::Singular: ++report.n_singular; break;
            default: ++report.n_unresolved; break;
        }
    }
    stratify(report, cls_cfg.kernel_tol);
    report.continuity = continuity_check(report, g.a);
    return report;
}

CriticalCapResult bisect_critical_height(const DiscreteOperator& op, double kappa, double rho,
                                         double blend_width, double h0_supercritical,
                                         const SolverConfig& scfg, double contact_tol_factor,
                                         int target_cells, int max_iters) {
    const ExtensionGrid& g = op.grid;

    auto solve_at = [&](double h0) {
        ObstacleSpec obs = make_cap_obstacle(g.n, h0, kappa, rho, blend_width);
        SolutionField f = solve_obstacle(op, obs, scfg);
        const double scale = std::max(h0, 1.0e-12);
        ContactMasks m =
            extract_contact_and_boundary(f, obs, contact_tol_factor * scfg.tol * scale);
        return std::tuple<ObstacleSpec, SolutionField, ContactMasks>(
            std::move(obs), std::move(f), std::move(m));
    };

    double h_hi = h0_supercritical;
    auto [obs_hi, f_hi, m_hi] = solve_at(h_hi);
    if (m_hi.contact_count() == 0)
        throw std::invalid_argument("bisect_critical_height: starting height is subcritical");

    double h_lo = h_hi / 8.0;
    for (int k = 0; k < 8; ++k) {
        auto [o, f, m] = solve_at(h_lo);
        if (m.contact_count() == 0) break;
        h_lo /= 4.0;
    }

    for (int it = 0; it < max_iters; ++it) {
        if (static_cast<int>(m_hi.contact_count()) <= target_cells) break;
        const double mid = 0.5 * (h_lo + h_hi);
        auto [o, f, m] = solve_at(mid);
        if (m.contact_count() == 0) {
            h_lo = mid;
        } else {
            h_hi = mid;
            obs_hi = std::move(o);
            f_hi = std::move(f);
            m_hi = std::move(m);
        }
        if ((h_hi - h_lo) / h_hi < 1e-13) break;
    }

    CriticalCapResult out;
    out.h0_lo = h_lo;
    out.h0_hi = h_hi;
    out.contact_count = static_cast<int>(m_hi.contact_count());

    // Contact centroid, snapped to the nearest contact node.
    const int n2 = g.n == 2 ? g.nx : 1;
    double cx1 = 0.0, cx2 = 0.0;
    int cnt = 0;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1)
            if (m_hi.is_contact(i1, i2)) {
                cx1 += g.x(i1);
                if (g.n == 2) cx2 += g.x(i2);
                ++cnt;
            }
    if (cnt > 0) {
        cx1 /= cnt;
        cx2 /= cnt;
    }
    out.x0 = {g.x(static_cast<int>(std::lround((cx1 + g.x_box) / g.hx))),
              g.n == 2 ? g.x(static_cast<int>(std::lround((cx2 + g.x_box) / g.hx))) : 0.0};
    out.obstacle = std::move(obs_hi);
    out.field = std::move(f_hi);
    out.masks = std::move(m_hi);
    return out;
}

} // namespace fraclab
