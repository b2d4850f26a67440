#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab {

namespace {

double boundary_value(const SolverConfig& cfg, const SpatialPoint& p, double y) {
    return cfg.boundary ? cfg.boundary(p, y) : 0.0;
}

} // namespace

PsorSolver::PsorSolver(const DiscreteOperator& op, const ObstacleSpec& obstacle,
                       const SolverConfig& cfg)
    : op_(op), cfg_(cfg) {
    const ExtensionGrid& g = op.grid;
    const int n2 = g.n == 2 ? g.nx : 1;

    u_.assign(g.num_nodes(), 0.0);
    phi_.assign(g.num_trace_nodes(), 0.0);

    double phi_plus = 0.0, gmax = 0.0;
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            SpatialPoint p{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};
            const double ph = obstacle.eval_phi(p);
            phi_[g.trace_node(i1, i2)] = ph;
            phi_plus = std::max(phi_plus, ph);
        }

    // Dirichlet data on lateral faces and top; feasibility on the trace ring.
    for (int j = 0; j < g.ny; ++j)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                if (!g.is_boundary(i1, i2, j)) continue;
                SpatialPoint p{g.x(i1), g.n == 2 ? g.x(i2) : 0.0};
                const double gv = boundary_value(cfg_, p, g.y(j));
                u_[g.node(i1, i2, j)] = gv;
                gmax = std::max(gmax, std::abs(gv));
            }
    scale_ = std::max({phi_plus, gmax, 1e-300});
    if (scale_ < 1e-299) scale_ = 1.0;

    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            if (!g.is_lateral_boundary(i1, i2)) continue;
            const std::size_t t = g.trace_node(i1, i2);
            if (u_[t] < phi_[t] - 1e-12 * scale_)
                throw InfeasibleBoundary("boundary data lies below the obstacle at a trace node");
        }

    // Feasible start: max(phi, 0) on the trace, zero elsewhere.
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < g.nx; ++i1) {
            if (g.is_lateral_boundary(i1, i2)) continue;
            const std::size_t t = g.trace_node(i1, i2);
            u_[t] = std::max(phi_[t], 0.0);
        }

    if (cfg_.omega == 0.0) {
        const int n_eff = std::max(g.nx - 1, 2 * (g.ny - 1));
        omega_ = std::min(1.995, 2.0 / (1.0 + std::sin(M_PI / n_eff)));
    } else {
        omega_ = cfg_.omega;
    }
}

void PsorSolver::sweep() {
    const ExtensionGrid& g = op_.grid;
    const int nx = g.nx;
    const int n2 = g.n == 2 ? nx : 1;

    for (int j = 0; j + 1 < g.ny; ++j) {
        const double cd = op_.coeff_down(j);
        const double cu = op_.coeff_up(j);
        const double cx = op_.coeff_lateral(j);
        const double d = op_.diag(j);
        for (int i2 = (g.n == 2 ? 1 : 0); i2 < (g.n == 2 ? n2 - 1 : 1); ++i2) {
            double* row = u_.data() + g.node(0, i2, j);
            const double* below = j > 0 ? row - (g.n == 2 ? nx * nx : nx) : row;
            const double* above = row + (g.n == 2 ? nx * nx : nx);
            const double* south = g.n == 2 ? row - nx : row;
            const double* north = g.n == 2 ? row + nx : row;
            const double* phi_row = j == 0 ? phi_.data() + g.trace_node(0, i2) : nullptr;
            for (int i1 = 1; i1 < nx - 1; ++i1) {
                double acc = cd * below[i1] + cu * above[i1] + cx * (row[i1 - 1] + row[i1 + 1]);
                if (g.n == 2) acc += cx * (south[i1] + north[i1]);
                double un = row[i1] + omega_ * (acc / d - row[i1]);
                if (phi_row && un < phi_row[i1]) un = phi_row[i1];
                row[i1] = un;
            }
        }
    }
    ++sweeps_;
}

double PsorSolver::complementarity_residual() const {
    const ExtensionGrid& g = op_.grid;
    const int n2 = g.n == 2 ? g.nx : 1;
    double worst = 0.0;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1) {
                if (g.is_boundary(i1, i2, j)) continue;
                const double rho = op_.scaled_residual_at(u_, i1, i2, j);
                double contrib;
                if (j == 0) {
                    const double gap = u_[g.trace_node(i1, i2)] - phi_[g.trace_node(i1, i2)];
                    contrib = std::max(-rho, std::min(gap, std::max(rho, 0.0)));
                } else {
                    contrib = std::abs(rho);
                }
                worst = std::max(worst, contrib);
            }
    return worst / scale_;
}

SolutionField PsorSolver::solve() {
    std::vector<double> history;
    double prev_checked = -1.0;
    int checks_since_progress = 0;

    while (sweeps_ < cfg_.max_iters) {
        for (int k = 0; k < cfg_.check_interval && sweeps_ < cfg_.max_iters; ++k) sweep();
        const double res = complementarity_residual();
        history.push_back(res);
        if (res < cfg_.tol) {
            SolutionField f;
            f.grid = op_.grid;
            f.values = u_;
            f.converged = true;
            f.residual_norm = res;
            f.iterations = sweeps_;
            return f;
        }
        // Stagnation fallback: residual not shrinking over ten check windows.
        if (prev_checked > 0.0 && res > 0.995 * prev_checked)
            ++checks_since_progress;
        else
            checks_since_progress = 0;
        prev_checked = res;
        if (!fell_back_ && omega_ > 1.0 && sweeps_ > 500 && checks_since_progress >= 10) {
            omega_ = 1.0;
            fell_back_ = true;
        }
    }
    throw NonConvergence("projected relaxation did not reach tol " + std::to_string(cfg_.tol) +
                             " in " + std::to_string(cfg_.max_iters) + " sweeps",
                         std::move(history));
}

SolutionField solve_obstacle(const DiscreteOperator& op, const ObstacleSpec& obstacle,
                             const SolverConfig& cfg) {
    validate_obstacle_in_box(obstacle, op.grid);
    PsorSolver solver(op, obstacle, cfg);
    return solver.solve();
}

double extension_poisson_kernel(int n, double s, double dist2, double y) {
    // Unit-mass normalization: n=1: C = Gamma(s+1/2)/(sqrt(pi) Gamma(s));
    // n=2: C = s/pi.
    const double c = n == 1 ? std::tgamma(s + 0.5) / (std::sqrt(M_PI) * std::tgamma(s))
                            : s / M_PI;
    return c * std::pow(y, 2.0 * s) / std::pow(dist2 + y * y, 0.5 * (n + 2.0 * s));
}

SolutionField solve_obstacle_consistent(const DiscreteOperator& op, const ObstacleSpec& obstacle,
                                        SolverConfig cfg, int outer_iters) {
    const ExtensionGrid& g = op.grid;
    if (g.n != 1)
        throw std::invalid_argument("solve_obstacle_consistent: implemented for n = 1");

    cfg.boundary = nullptr;
    SolutionField field = solve_obstacle(op, obstacle, cfg);

    for (int outer = 0; outer < outer_iters; ++outer) {
        // Poisson integral of the current trace (zero outside the box, so the
        // truncated sum is the exact representation of the killed problem).
        std::vector<double> trace(g.nx);
        for (int i = 0; i < g.nx; ++i) trace[i] = field.trace(i);
        auto poisson = [&g, trace](const SpatialPoint& p, double y) {
            if (y <= 0.0) return 0.0;
            double acc = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                const double dx = p[0] - g.x(i);
                const double wq = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;  // trapezoid
                acc += wq * trace[i] * extension_poisson_kernel(1, g.s, dx * dx, y);
            }
            return acc * g.hx;
        };
        SolverConfig inner = cfg;
        inner.boundary = poisson;
        field = solve_obstacle(op, obstacle, inner);
    }
    return field;
}

MonotonicityReport monotonicity_check(const SolutionField& field, double tol) {
    const ExtensionGrid& g = field.grid;
    const int n2 = g.n == 2 ? g.nx : 1;
    MonotonicityReport rep;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < g.nx; ++i1)
                rep.max_increase = std::max(
                    rep.max_increase, field.value(i1, i2, j + 1) - field.value(i1, i2, j));
    rep.pass = rep.max_increase <= tol;
    return rep;
}

double weighted_normal_flux(const DiscreteOperator& op, const SolutionField& field, int i1,
                            int i2) {
    const ExtensionGrid& g = op.grid;
    const double area = g.n == 1 ? g.hx : g.hx * g.hx;
    return -op.residual_at(field.values, i1, i2, 0) / (2.0 * area);
}

} // namespace fraclab
