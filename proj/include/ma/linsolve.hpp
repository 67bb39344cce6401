#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ma/sparse.hpp"

namespace ma {

struct LinSolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    /// Relative residual after each iteration (index 0 is the initial residual); filled on request.
    std::vector<double> residual_history;
};

enum class PreconditionerKind { identity, ilu0, multigrid };

/// z = P^{-1} r for a fixed linear operator P^{-1}.
class Preconditioner {
public:
    virtual ~Preconditioner() = default;

    virtual PreconditionerKind kind() const noexcept = 0;
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;

    std::vector<double> apply(std::span<const double> r) const {
        std::vector<double> z(r.size());
        apply(r, z);
        return z;
    }
};

class IdentityPreconditioner final : public Preconditioner {
public:
    PreconditionerKind kind() const noexcept override { return PreconditionerKind::identity; }
    using Preconditioner::apply;
    void apply(std::span<const double> r, std::span<double> z) const override;
};

/// Incomplete LU on the sparsity pattern of A (no fill-in); unit lower factor.
class Ilu0Preconditioner final : public Preconditioner {
public:
    /// Throws SolverError(zero_pivot) when a pivot vanishes.
    explicit Ilu0Preconditioner(const SparseOperator& a);

    PreconditionerKind kind() const noexcept override { return PreconditionerKind::ilu0; }
    using Preconditioner::apply;
    void apply(std::span<const double> r, std::span<double> z) const override;

    /// Strictly lower part holds L (unit diagonal implied), the rest holds U, on A's pattern.
    const SparseOperator& factors() const noexcept { return lu_; }

private:
    SparseOperator lu_;
    std::vector<std::size_t> diag_pos_;
};

std::unique_ptr<Ilu0Preconditioner> ilu0(const SparseOperator& a);

struct CgOptions {
    double tol = 1e-10;
    std::size_t max_iters = 1000;
    bool record_history = false;
    /// Called after every iteration with the current iterate and residual.
    std::function<void(std::size_t iteration, std::span<const double> x, std::span<const double> r)> observer;
};

struct CgResult {
    std::vector<double> x;
    LinSolveStats stats;
};

/**
 * Preconditioned conjugate gradients from a zero initial guess.
 *
 * Stops when ||b - Ax||_2 <= tol ||b||_2 or after max_iters iterations (converged = false).
 * Throws SolverError(breakdown) when p.Ap <= 0 or r.z <= 0, i.e. A or P is not SPD.
 */
CgResult cg(const SparseOperator& a, std::span<const double> b, const CgOptions& options, const Preconditioner& p);

/// Sparse direct factorisation, computed once and reused. LDL^T for symmetric input, LU otherwise.
class SparseDirectSolver {
public:
    explicit SparseDirectSolver(const SparseOperator& a);
    ~SparseDirectSolver();
    SparseDirectSolver(SparseDirectSolver&&) noexcept;
    SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

    /// Throws SolverError(singular) unless ||Ax - b|| <= 1e-10 ||b||.
    std::vector<double> solve(std::span<const double> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<double> direct_solve(const SparseOperator& a, std::span<const double> b);

/// Sparse LU for the nonsymmetric linearised systems; singular matrices throw SolverError(singular).
std::vector<double> solve_nonsymmetric(const SparseOperator& a, std::span<const double> b);

}  // namespace ma
