#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/radial_diagnostics.hpp"
#include "fraclab/solver.hpp"

namespace fraclab {

/// Trace-node masks: contact = {u - phi <= contact_tol}, free boundary =
/// contact nodes with at least one non-contact trace neighbor.
struct ContactMasks {
    int n = 1;
    int nx = 0;
    double contact_tol = 0.0;
    std::vector<std::uint8_t> contact;
    std::vector<std::uint8_t> fb;

    bool is_contact(int i1, int i2 = 0) const {
        return contact[n == 1 ? i1 : static_cast<std::size_t>(i2) * nx + i1] != 0;
    }
    bool is_fb(int i1, int i2 = 0) const {
        return fb[n == 1 ? i1 : static_cast<std::size_t>(i2) * nx + i1] != 0;
    }
    std::size_t contact_count() const;
    std::size_t fb_count() const;
};

ContactMasks extract_contact_and_boundary(const SolutionField& field,
                                          const ObstacleSpec& obstacle, double contact_tol);

/// Fraction of contact nodes among trace nodes in the n-ball B_r(x0).
double density_ratio(const ContactMasks& masks, const ExtensionGrid& grid,
                     const SpatialPoint& x0, double r);

enum class PointClass { Regular, Singular, Unresolved };
std::string to_string(PointClass c);

struct FreeBoundaryPoint {
    int id = 0;
    SpatialPoint x{0.0, 0.0};
    double phi_limit = 0.0;   // extrapolated Phi(0+)
    double phi_unc = 0.0;
    double m_hat = 0.0;       // extrapolated N(0+), the homogeneity estimate
    double m_unc = 0.0;
    PointClass cls = PointClass::Unresolved;
    double density_small_r = 0.0;
    std::optional<QuadraticBlowup> p2;
    double fit_residual = 0.0;
    bool degenerate_fit = false;  // fitted A ~ 0, inconsistent with A != 0
    std::optional<int> stratum;
    double c1_hat = 0.0;
    double c2_hat = 0.0;
    bool nondeg_resolved = false;
};

struct ClassifyConfig {
    double class_tol = 0.15;
    double kernel_tol = 1e-3;
    double contact_tol_factor = 10.0;  // contact_tol = factor * solver tol * scale
    double density_singular_max = 0.45;
    double density_trend_slack = 0.05;
};

struct P2Fit {
    QuadraticBlowup q;
    double residual = 0.0;  // rms misfit over the annulus, scaled by r_fit^2
};

/// Least-squares fit of the trace of v over the annulus
/// r_fit/2 <= |x - x0| <= r_fit against {x_i x_j}; A is symmetrized and
/// projected onto the PSD cone, b = trace(A)/(1+a). Widens the annulus once
/// if it contains too few nodes; throws if still rank-deficient.
P2Fit fit_p2(const CenteredField& cf, double r_fit);

struct ContinuityRow {
    int id_a = 0, id_b = 0;
    double separation = 0.0;
    double distance = 0.0;  // weighted L2 gap of the fitted quadratics on dB_1
};

struct ContinuityTable {
    std::vector<ContinuityRow> rows;       // sorted by separation
    std::vector<double> envelope;          // running max of distance
};

struct AnalyzedPoint {
    FreeBoundaryPoint point;
    RadialDiagnostics diag;
    std::vector<double> density;  // density ratio per ladder radius
};

struct FreeBoundaryReport {
    int schema_version = 1;
    ContactMasks masks;
    std::vector<AnalyzedPoint> points;
    int n_regular = 0, n_singular = 0, n_unresolved = 0;
    ContinuityTable continuity;
    double c0_freq_used = 0.0;
};

/// Classification of one center from its diagnostics table and density trend.
FreeBoundaryPoint classify_point(int id, const SpatialPoint& x, const RadialDiagnostics& diag,
                                 const std::vector<double>& density, double s,
                                 const ClassifyConfig& cfg);

ContinuityTable continuity_check(const FreeBoundaryReport& report, double a);

/// Kernel dimension of A relative to kernel_tol * lambda_max; -1 flags A ~ 0
/// (inconsistent with the quadratic class, whose members have A != 0).
int stratum_of(const QuadraticBlowup& q, double kernel_tol);

/// Assigns strata: k = #eigenvalues of A below kernel_tol * lambda_max.
void stratify(FreeBoundaryReport& report, double kernel_tol);

/// Full pass: masks, per-FB-point diagnostics, classification, fits,
/// non-degeneracy constants, continuity and strata.
FreeBoundaryReport analyze_free_boundary(const SolutionField& field,
                                         const ObstacleSpec& obstacle,
                                         const DiagnosticsConfig& diag_cfg,
                                         const ClassifyConfig& cls_cfg,
                                         const DiscreteOperator& op, double contact_tol);

/// Bisection on the cap height between an empty and a nonempty contact set,
/// stopping when the contact set at the nonempty end has at most
/// `target_cells` nodes. Produces near-critical geometry whose center is a
/// homogeneity-2 candidate.
struct CriticalCapResult {
    double h0_lo = 0.0;       // largest height with empty contact seen
    double h0_hi = 0.0;       // smallest height with nonempty contact seen
    ObstacleSpec obstacle;    // the cap at h0_hi
    SolutionField field;      // solve at h0_hi
    ContactMasks masks;
    SpatialPoint x0{0.0, 0.0};  // contact centroid node
    int contact_count = 0;
};

CriticalCapResult bisect_critical_height(const DiscreteOperator& op, double kappa, double rho,
                                         double blend_width, double h0_supercritical,
                                         const SolverConfig& scfg, double contact_tol_factor,
                                         int target_cells = 3, int max_iters = 48);

} // namespace fraclab
