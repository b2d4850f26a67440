#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraclab/centered_field.hpp"
#include "fraclab/quadratic.hpp"

namespace fraclab {

struct DiagnosticsConfig {
    double c0_freq = 8.0;     // C0 in the truncated frequency (see calibrate_c0)
    double gamma = 1.0;       // Holder exponent from the obstacle
    double r_hat = 0.45;      // absolute cap on the largest radius
    double ladder_ratio = 2.0;
    double min_cells = 4.0;   // smallest radius, in units of hx
    int quad_density = 8;     // angular nodes per unit of r/hx
};

/// Per-center, per-radius table of the radial functionals. Radii descend
/// (geometric ladder). Phi and phi_slack are NaN at the ladder endpoints
/// where the centered log-difference is unavailable.
struct RadialDiagnostics {
    int n = 1;
    double a = 0.0;
    SpatialPoint center{0.0, 0.0};
    DiagnosticsConfig config;

    std::vector<double> r;
    std::vector<double> H, H_err;
    std::vector<double> G, G_err;
    std::vector<double> D, D_err;
    std::vector<double> I_surface, I_volume;
    std::vector<double> N;
    std::vector<double> W;
    std::vector<double> Phi, phi_slack;
    std::vector<double> d_r;  // blow-up normalization (H/r^{n+a})^{1/2}

    std::size_t size() const { return r.size(); }
};

/// Surface mass \int_{dB_r} |y|^a v^2 by weighted angular quadrature.
double surface_H(const CenteredField& cf, double r, int quad_density = 8);

/// Bulk quantities \int_{B_r} |y|^a |grad v|^2 and \int_{B_r} |y|^a v^2 by
/// cell-wise quadrature with centered-difference gradients. Cells cut by the
/// sphere enter with a subsampled coverage fraction.
double bulk_D(const CenteredField& cf, double r);
double bulk_G(const CenteredField& cf, double r);

/// Boundary flux \int_{dB_r} |y|^a v v_nu, computed two ways: directly by
/// surface quadrature, and as D(r) - <v, L_a v> via the discrete operator.
/// Their gap is a quadrature-consistency metric.
struct FluxPair {
    double surface = 0.0;
    double volume = 0.0;
};
FluxPair flux_I(const CenteredField& cf, double r, const DiscreteOperator& op,
                int quad_density = 8);

/// Almgren quotient r D(r) / H(r). Throws DegenerateH when H(r) is below the
/// machine floor.
double frequency_N(const CenteredField& cf, double r, int quad_density = 8);

/// Weiss energy r^{-(n+a+3)} D - 2 r^{-(n+a+4)} H.
double weiss_W(const RadialDiagnostics& diag, std::size_t k);

/// Scaled squared distance to a quadratic on the sphere:
///   r^{-(n+a+4)} \int_{dB_r} |y|^a (v - p2(x-x0, y))^2.
double monneau_M(const CenteredField& cf, const QuadraticBlowup& q, double r,
                 int quad_density = 8);
std::vector<double> monneau_ladder(const CenteredField& cf, const QuadraticBlowup& q,
                                   std::span<const double> radii, int quad_density = 8);

/// Truncated frequency at ladder index k:
///   (r + C0 r^2) d/dr log max{H(r), r^{n+a+4+2 gamma}}.
/// Exact on the power branch; otherwise the log-derivative comes from the
/// adjacent ladder radii (never from differentiated quadratures).
double truncated_Phi(const RadialDiagnostics& diag, std::size_t k, double c0);

std::vector<double> phi_ladder(const RadialDiagnostics& diag, double c0);
/// Monotonicity slack at index k: 3x the propagated relative H error.
std::vector<double> phi_slack_ladder(const RadialDiagnostics& diag, double c0,
                                     double slack_mult = 3.0);
/// Phi(r) nondecreasing in r along the ladder, up to the per-index slack.
bool phi_nondecreasing(const RadialDiagnostics& diag, double c0, double slack_mult = 3.0);

/// Smallest C0 in {1, 2, 4, ..., 64} making Phi nondecreasing on every table;
/// returns 64 if none works (callers should treat that as a failed
/// calibration).
double calibrate_c0(std::span<const RadialDiagnostics> tables, double slack_mult = 3.0);

/// Geometric radius ladder for a center: from min(r_hat, distance to the box
/// boundary) down to min_cells * hx.
std::vector<double> radius_ladder(const ExtensionGrid& grid, const SpatialPoint& center,
                                  const DiagnosticsConfig& cfg);

/// Builds the full table for one center. `op` enables the volume route of
/// the flux identity; it may be null.
RadialDiagnostics compute_radial_diagnostics(const CenteredField& cf,
                                             const DiagnosticsConfig& cfg,
                                             const DiscreteOperator* op = nullptr);

/// Non-degeneracy constants over a ladder:
///   c1_hat = min_k sup_{B_{r_k}(x0)} (u - phi) / r_k^2,
///   c2_hat = min_k G(r_k) / r_k^{n+a+5}.
struct NondegeneracyScan {
    std::vector<double> r;
    std::vector<double> c1;  // sup(u-phi)/r^2 per radius
    std::vector<double> c2;  // G(r)/r^{n+a+5} per radius
    double c1_hat = 0.0;
    double c2_hat = 0.0;
    bool resolved = false;  // false when the ladder reaches below 4 cells
    bool pass(double threshold) const { return resolved && c1_hat > threshold && c2_hat > threshold; }
};

NondegeneracyScan nondegeneracy_scan(const SolutionField& field, const ObstacleSpec& obstacle,
                                     const SpatialPoint& x0, std::span<const double> radii);

} // namespace fraclab
