#pragma once

#include "ma/cases.hpp"
#include "ma/grid.hpp"
#include "ma/sparse.hpp"

namespace ma {

/// Central-difference Hessian entries at the interior nodes.
struct HessianFields {
    Field uxx;
    Field uyy;
    Field uxy;
};

struct GradientFields {
    Field ux;
    Field uy;
};

/// 3-point stencils for uxx, uyy and the 4-point cross stencil for uxy; boundary reads come from bc.
HessianFields second_derivatives(const Grid& grid, const Field& u, const BoundaryData& bc);

/// Central first differences.
GradientFields gradient(const Grid& grid, const Field& u, const BoundaryData& bc);

/// uxx*uyy - uxy*uxy, elementwise.
Field hessian_det(const HessianFields& h);

/// uxx + uyy, elementwise.
Field hessian_trace(const HessianFields& h);

/// Largest eigenvalue of each 2x2 Hessian, (tau + sqrt(tau^2 - 4 det)) / 2.
/// Radicands down to -1e-12*max(1, tau^2) are clamped to zero; anything lower throws InconsistencyError.
Field lambda_max(const Field& tau, const Field& det);

/// f(x_j, y_k, grad_h u) at the interior nodes; the gradient is only formed for gradient-dependent cases.
Field rhs_at_iterate(const Grid& grid, const Field& u, const BoundaryData& bc, const ProblemCase& c);

/// Discrete residual det(D^2 u) - f(x, grad u). The gradient is only evaluated for
/// gradient-dependent cases.
Field residual(const Grid& grid, const Field& u, const BoundaryData& bc, const ProblemCase& c);

/**
 * Negated 5-point Laplacian, -Delta_h, on the interior unknowns.
 *
 * Rows of nodes next to the boundary omit the boundary columns; their
 * contribution goes to the right-hand side (see laplacian_boundary_rhs).
 * Solving (-Delta_h) v = rho / Lambda is the same system as Delta_h v = -rho / Lambda.
 */
SparseOperator assemble_laplacian(const Grid& grid);

/// Right-hand-side contribution of boundary values vb to (-Delta_h) v = b.
Field laplacian_boundary_rhs(const Grid& grid, const BoundaryData& vb);

/**
 * Linearised Monge-Ampere operator -(C : D^2 v - q . grad v) with C = cof(D^2 u).
 *
 * Per row: uyy * (xx stencil) - 2 uxy * (cross stencil) + uxx * (yy stencil)
 * - qx * (x central difference) - qy * (y central difference), negated.
 * Zero coefficients contribute no pattern entries, so identity Hessians with q = 0
 * reproduce assemble_laplacian exactly.
 */
SparseOperator assemble_newton_operator(const Grid& grid, const HessianFields& h, const GradientFields& q);

/// Right-hand-side contribution of boundary values vb for assemble_newton_operator.
Field newton_boundary_rhs(const Grid& grid, const HessianFields& h, const GradientFields& q, const BoundaryData& vb);

}  // namespace ma
