#include "ma/fdops.hpp"

#include <algorithm>
#include <cmath>

namespace ma {

namespace {

void check_dims(const Grid& grid, const Field& u, const BoundaryData& bc) {
    if (u.n() != grid.n() || bc.n() != grid.n() || u.size() != grid.size()) {
        throw InvalidArgument("field/boundary dimensions do not match the grid");
    }
}

void check_same(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw InvalidArgument("field dimension mismatch");
}

/// Coefficients of L v = axx vxx + ayy vyy + axy vxy + bx vx + by vy at one node.
struct NodeCoeffs {
    double axx = 1.0;
    double ayy = 1.0;
    double axy = 0.0;
    double bx = 0.0;
    double by = 0.0;
};

struct StencilEntry {
    int dj;
    int dk;
    double weight;
};

/// Weights of L at one node, diagonal first. Zero off-diagonal weights are skipped.
template <typename Out>
void stencil(const NodeCoeffs& c, double h, Out&& out) {
    const double h2 = h * h;
    const double inv_h2 = 1.0 / h2;
    const double inv_2h = 1.0 / (2.0 * h);
    const double inv_4h2 = 1.0 / (4.0 * h2);

    out(StencilEntry{0, 0, -2.0 * c.axx * inv_h2 - 2.0 * c.ayy * inv_h2});
    const StencilEntry axis[] = {
        {-1, 0, c.axx * inv_h2 - c.bx * inv_2h},
        {+1, 0, c.axx * inv_h2 + c.bx * inv_2h},
        {0, -1, c.ayy * inv_h2 - c.by * inv_2h},
        {0, +1, c.ayy * inv_h2 + c.by * inv_2h},
    };
    for (const auto& e : axis) {
        if (e.weight != 0.0) out(e);
    }
    if (c.axy != 0.0) {
        const double w = c.axy * inv_4h2;
        out(StencilEntry{-1, -1, w});
        out(StencilEntry{-1, +1, -w});
        out(StencilEntry{+1, -1, -w});
        out(StencilEntry{+1, +1, w});
    }
}

/// Assembles -L over the interior; boundary neighbours are dropped from the pattern.
template <typename CoeffFn>
SparseOperator assemble(const Grid& grid, CoeffFn&& coeffs, bool symmetric) {
    const std::size_t n = grid.n();
    SparseBuilder builder(grid.size(), grid.size());
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t row = grid.index(j, k);
            stencil(coeffs(row), grid.dx(), [&](const StencilEntry& e) {
                const std::size_t nj = j + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.dj));
                const std::size_t nk = k + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.dk));
                if (BoundaryData::on_boundary(n, nj, nk)) return;
                builder.add(grid.index(nj, nk), -e.weight);
            });
            builder.end_row();
        }
    }
    return builder.finish(symmetric);
}

/// Moves L applied to the boundary values onto the right-hand side of -L v = b.
template <typename CoeffFn>
Field boundary_rhs(const Grid& grid, CoeffFn&& coeffs, const BoundaryData& vb) {
    const std::size_t n = grid.n();
    if (vb.n() != n) throw InvalidArgument("boundary data does not match the grid");
    Field rhs(grid);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (j != 1 && j != n && k != 1 && k != n) continue;
            const std::size_t row = grid.index(j, k);
            double acc = 0.0;
            stencil(coeffs(row), grid.dx(), [&](const StencilEntry& e) {
                const std::size_t nj = j + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.dj));
                const std::size_t nk = k + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.dk));
                if (BoundaryData::on_boundary(n, nj, nk)) acc += e.weight * vb.at(nj, nk);
            });
            rhs[row] = acc;
        }
    }
    return rhs;
}

auto newton_coeffs(const HessianFields& h, const GradientFields& q) {
    return [&h, &q](std::size_t row) {
        return NodeCoeffs{h.uyy[row], h.uxx[row], -2.0 * h.uxy[row], -q.ux[row], -q.uy[row]};
    };
}

void check_newton_inputs(const Grid& grid, const HessianFields& h, const GradientFields& q) {
    for (const Field* f : {&h.uxx, &h.uyy, &h.uxy, &q.ux, &q.uy}) {
        if (f->size() != grid.size()) throw InvalidArgument("coefficient field does not match the grid");
    }
}

}  // namespace

HessianFields second_derivatives(const Grid& grid, const Field& u, const BoundaryData& bc) {
    check_dims(grid, u, bc);
    const std::size_t n = grid.n();
    const std::size_t m = n + 2;
    const auto full = padded(u, bc);
    const double h2 = grid.dx() * grid.dx();
    auto at = [&](std::size_t j, std::size_t k) { return full[k * m + j]; };

    HessianFields out{Field(grid), Field(grid), Field(grid)};
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t i = grid.index(j, k);
            out.uxx[i] = (at(j - 1, k) - 2.0 * at(j, k) + at(j + 1, k)) / h2;
            out.uyy[i] = (at(j, k - 1) - 2.0 * at(j, k) + at(j, k + 1)) / h2;
            out.uxy[i] = (at(j - 1, k - 1) - at(j - 1, k + 1) - at(j + 1, k - 1) + at(j + 1, k + 1)) / (4.0 * h2);
        }
    }
    return out;
}

GradientFields gradient(const Grid& grid, const Field& u, const BoundaryData& bc) {
    check_dims(grid, u, bc);
    const std::size_t n = grid.n();
    const std::size_t m = n + 2;
    const auto full = padded(u, bc);
    const double two_h = 2.0 * grid.dx();
    auto at = [&](std::size_t j, std::size_t k) { return full[k * m + j]; };

    GradientFields out{Field(grid), Field(grid)};
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t i = grid.index(j, k);
            out.ux[i] = (at(j + 1, k) - at(j - 1, k)) / two_h;
            out.uy[i] = (at(j, k + 1) - at(j, k - 1)) / two_h;
        }
    }
    return out;
}

Field hessian_det(const HessianFields& h) {
    check_same(h.uxx, h.uyy);
    check_same(h.uxx, h.uxy);
    Field out = h.uxx;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = h.uxx[i] * h.uyy[i] - h.uxy[i] * h.uxy[i];
    return out;
}

Field hessian_trace(const HessianFields& h) {
    check_same(h.uxx, h.uyy);
    Field out = h.uxx;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = h.uxx[i] + h.uyy[i];
    return out;
}

Field lambda_max(const Field& tau, const Field& det) {
    check_same(tau, det);
    Field out = tau;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = tau[i];
        double rad = t * t - 4.0 * det[i];
        if (rad < 0.0) {
            const double tol = 1e-12 * std::max(1.0, t * t);
            if (rad < -tol) {
                throw InconsistencyError("negative eigenvalue radicand " + std::to_string(rad) + " at entry " +
                                         std::to_string(i));
            }
            rad = 0.0;
        }
        out[i] = 0.5 * (t + std::sqrt(rad));
    }
    return out;
}

Field rhs_at_iterate(const Grid& grid, const Field& u, const BoundaryData& bc, const ProblemCase& c) {
    check_dims(grid, u, bc);
    Field out(grid);
    const std::size_t n = grid.n();
    GradientFields g;
    if (c.gradient_dependent) g = gradient(grid, u, bc);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t i = grid.index(j, k);
            const Vec2 p = c.gradient_dependent ? Vec2{g.ux[i], g.uy[i]} : Vec2{};
            const double fv = c.f(grid.coord(j), grid.coord(k), p);
            if (!std::isfinite(fv)) throw NonFiniteError("non-finite right-hand side", j, k);
            out[i] = fv;
        }
    }
    return out;
}

Field residual(const Grid& grid, const Field& u, const BoundaryData& bc, const ProblemCase& c) {
    Field rho = hessian_det(second_derivatives(grid, u, bc));
    rho -= rhs_at_iterate(grid, u, bc, c);
    return rho;
}

SparseOperator assemble_laplacian(const Grid& grid) {
    return assemble(grid, [](std::size_t) { return NodeCoeffs{}; }, true);
}

Field laplacian_boundary_rhs(const Grid& grid, const BoundaryData& vb) {
    return boundary_rhs(grid, [](std::size_t) { return NodeCoeffs{}; }, vb);
}

SparseOperator assemble_newton_operator(const Grid& grid, const HessianFields& h, const GradientFields& q) {
    check_newton_inputs(grid, h, q);
    return assemble(grid, newton_coeffs(h, q), false);
}

Field newton_boundary_rhs(const Grid& grid, const HessianFields& h, const GradientFields& q, const BoundaryData& vb) {
    check_newton_inputs(grid, h, q);
    return boundary_rhs(grid, newton_coeffs(h, q), vb);
}

}  // namespace ma
