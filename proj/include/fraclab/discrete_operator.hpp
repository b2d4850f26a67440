#pragma once

#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/grid.hpp"

namespace fraclab {

/// Finite-volume discretization of the weighted extension operator
///   L_a u = -div(|y|^a grad u)
/// on the node-centered cells of an ExtensionGrid. Stencil coefficients
/// depend only on the y-row, so they are stored per row.
///
/// The trace row j = 0 represents the full symmetric cell [-hy/2, hy/2]:
/// its couplings carry a factor 2 from even reflection, so the integrated
/// residual there is the discrete analogue of the total weighted normal flux
/// -2 lim_{y->0} |y|^a u_y per trace cell.
class DiscreteOperator {
public:
    ExtensionGrid grid;

    double coeff_down(int j) const { return c_down_[j]; }
    double coeff_up(int j) const { return c_up_[j]; }
    double coeff_lateral(int j) const { return c_x_[j]; }
    double diag(int j) const { return diag_[j]; }

    /// Integrated flux imbalance of the row equation at a non-Dirichlet node:
    /// approximately \int_cell L_a u over the (reflected) control volume.
    double residual_at(const std::vector<double>& u, int i1, int i2, int j) const {
        const ExtensionGrid& g = grid;
        const double uc = u[g.node(i1, i2, j)];
        double r = c_up_[j] * (uc - u[g.node(i1, i2, j + 1)]);
        if (j > 0) r += c_down_[j] * (uc - u[g.node(i1, i2, j - 1)]);
        r += c_x_[j] * (2.0 * uc - u[g.node(i1 - 1, i2, j)] - u[g.node(i1 + 1, i2, j)]);
        if (g.n == 2)
            r += c_x_[j] * (2.0 * uc - u[g.node(i1, i2 - 1, j)] - u[g.node(i1, i2 + 1, j)]);
        return r;
    }

    /// Residual in solution units (divided by the diagonal coefficient).
    double scaled_residual_at(const std::vector<double>& u, int i1, int i2, int j) const {
        return residual_at(u, i1, i2, j) / diag_[j];
    }

    /// Node multiplicity under even reflection: trace cells appear once,
    /// off-plane cells twice. The operator is symmetric under the inner
    /// product weighted by these multiplicities.
    double reflection_mult(int j) const { return j == 0 ? 1.0 : 2.0; }

    /// Discrete full-space energy \int |y|^a |grad u|^2 (Dirichlet form).
    double dirichlet_energy(const std::vector<double>& u) const;

private:
    friend DiscreteOperator assemble_operator(const ExtensionGrid& grid);
    std::vector<double> c_down_, c_up_, c_x_, diag_;
};

DiscreteOperator assemble_operator(const ExtensionGrid& grid);

} // namespace fraclab
