#pragma once

#include <functional>
#include <vector>

#include "fraclab/discrete_operator.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/field.hpp"
#include "fraclab/obstacle.hpp"

namespace fraclab {

struct SolverConfig {
    /// Relaxation factor in (0,2); 0 selects a near-optimal value from the
    /// grid size. Falls back to 1.0 once if the residual stagnates.
    double omega = 1.8;
    /// Complementarity tolerance, relative to max(||phi^+||_inf, ||g||_inf).
    double tol = 1e-10;
    int max_iters = 400000;
    int check_interval = 25;
    /// Dirichlet data g(x, y) on the lateral faces and the top; nullptr means
    /// zero data. Trace boundary nodes take g(x, 0), which must dominate phi.
    std::function<double(const SpatialPoint&, double)> boundary;
};

/// Projected SOR on the M-matrix system: sweeps are lexicographic and the
/// trace rows project onto {u >= phi} after each update, so feasibility is
/// exact at all times. Exposed as a steppable object so tests can watch the
/// energy decay sweep by sweep.
class PsorSolver {
public:
    PsorSolver(const DiscreteOperator& op, const ObstacleSpec& obstacle, const SolverConfig& cfg);

    void sweep();
    /// Diagonal-scaled complementarity residual, relative to the data scale:
    /// |rho|/diag off the trace, max(-rho, min(u - phi, rho))/diag on it.
    double complementarity_residual() const;
    double energy() const { return op_.dirichlet_energy(u_); }
    const std::vector<double>& values() const { return u_; }
    double omega() const { return omega_; }
    int sweeps_done() const { return sweeps_; }
    double data_scale() const { return scale_; }

    /// Runs to tolerance; throws NonConvergence after max_iters.
    SolutionField solve();

private:
    const DiscreteOperator& op_;
    SolverConfig cfg_;
    std::vector<double> u_;
    std::vector<double> phi_;  // obstacle at trace nodes
    double omega_;
    double scale_;
    int sweeps_ = 0;
    bool fell_back_ = false;
};

/// Solves the extension obstacle problem for the given operator, obstacle and
/// config. Validates obstacle containment and boundary feasibility first.
SolutionField solve_obstacle(const DiscreteOperator& op, const ObstacleSpec& obstacle,
                             const SolverConfig& cfg);

/// Re-solves with Dirichlet data reconstructed from the Poisson integral of
/// the current trace, iterated `outer_iters` times. The converged field
/// matches the half-space extension of its own trace on the box boundary,
/// removing the truncation bias of hard zero data. Used by the stopping-time
/// cross-checks, where the comparison target is the process killed outside
/// the x-box rather than the zero-boundary box problem.
SolutionField solve_obstacle_consistent(const DiscreteOperator& op, const ObstacleSpec& obstacle,
                                        SolverConfig cfg, int outer_iters = 4);

struct MonotonicityReport {
    double max_increase = 0.0;  // max over nodes of u(x, y+hy) - u(x, y)
    bool pass = false;
};

/// Checks that the field is non-increasing in y, the discrete form of
/// y^a u_y <= 0 for zero-boundary local solves.
MonotonicityReport monotonicity_check(const SolutionField& field, double tol);

/// Discrete weighted normal flux at a trace node: the trace-row flux
/// imbalance divided by -2 hx^n, i.e. the discrete lim_{y->0} |y|^a u_y.
/// Nonpositive on the contact set, ~0 off it.
double weighted_normal_flux(const DiscreteOperator& op, const SolutionField& field, int i1,
                            int i2 = 0);

/// Half-space Poisson kernel of the weighted extension, normalized to unit
/// mass: P_y(x) = C y^{2s} / (|x|^2 + y^2)^{(n+2s)/2}.
double extension_poisson_kernel(int n, double s, double dist2, double y);

} // namespace fraclab
