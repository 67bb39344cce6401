#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ma/grid.hpp"
#include "ma/linsolve.hpp"

namespace ma {

/**
 * One geometric multigrid V-cycle for the 5-point operator -Delta_h, used as a fixed SPD preconditioner.
 *
 * Coarse grids keep every other line (n -> floor(n/2)) until n <= 3, where the
 * system is solved exactly. Transfers are bilinear prolongation P and
 * full-weighting restriction R = P^T/4; coarse operators are Galerkin R A P.
 * Smoothing is one pre- and one post-sweep of damped Jacobi (omega = 0.8).
 */
class MultigridPreconditioner final : public Preconditioner {
public:
    explicit MultigridPreconditioner(const Grid& grid, double omega = 0.8);
    ~MultigridPreconditioner() override;

    PreconditionerKind kind() const noexcept override { return PreconditionerKind::multigrid; }
    using Preconditioner::apply;
    void apply(std::span<const double> r, std::span<double> z) const override;

    std::size_t levels() const noexcept;
    /// Interior nodes per axis on each level, finest first.
    std::vector<std::size_t> level_sizes() const;

private:
    struct Level;
    struct Coarsest;

    void vcycle(std::size_t level, std::span<const double> b, std::span<double> x) const;

    double omega_;
    std::vector<Level> levels_;
    std::unique_ptr<Coarsest> coarsest_;
};

std::unique_ptr<MultigridPreconditioner> multigrid_preconditioner(const Grid& grid);

/// Bilinear prolongation from the floor(n/2) coarse grid to the n fine grid (n^2 x nc^2).
SparseOperator bilinear_prolongation(std::size_t n_fine);

}  // namespace ma
