#include "ma/poisson.hpp"

#include <algorithm>
#include <array>

#include "ma/errors.hpp"
#include "ma/fdops.hpp"
#include "ma/multigrid.hpp"

namespace ma {

namespace {

constexpr std::array<std::pair<SolverKind, std::string_view>, 5> kSolverNames{{
    {SolverKind::direct, "direct"},
    {SolverKind::cg, "cg"},
    {SolverKind::pcg_ilu, "pcg-ilu"},
    {SolverKind::pcg_mg, "pcg-mg"},
    {SolverKind::green, "green"},
}};

class DirectPoisson final : public PoissonSolver {
public:
    explicit DirectPoisson(const Grid& grid) : solver_(assemble_laplacian(grid)) {}

    SolverKind kind() const noexcept override { return SolverKind::direct; }

    LinSolveStats solve(std::span<const double> rhs, std::span<double> v) const override {
        const auto x = solver_.solve(rhs);
        std::copy(x.begin(), x.end(), v.begin());
        return {0, 0.0, true, {}};
    }

private:
    SparseDirectSolver solver_;
};

class CgPoisson final : public PoissonSolver {
public:
    CgPoisson(SolverKind kind, const Grid& grid, const PoissonOptions& options)
        : kind_(kind), a_(assemble_laplacian(grid)) {
        opts_.tol = options.cg_tol;
        opts_.max_iters = options.cg_max_iters ? options.cg_max_iters : 10 * grid.size();
        switch (kind) {
            case SolverKind::pcg_ilu: precond_ = ilu0(a_); break;
            case SolverKind::pcg_mg: precond_ = multigrid_preconditioner(grid); break;
            default: precond_ = std::make_unique<IdentityPreconditioner>(); break;
        }
    }

    SolverKind kind() const noexcept override { return kind_; }

    LinSolveStats solve(std::span<const double> rhs, std::span<double> v) const override {
        auto result = cg(a_, rhs, opts_, *precond_);
        if (!result.stats.converged) {
            throw SolverError(SolverError::Kind::not_converged,
                              "CG did not reach tolerance in " + std::to_string(result.stats.iterations) + " iterations");
        }
        std::copy(result.x.begin(), result.x.end(), v.begin());
        return result.stats;
    }

private:
    SolverKind kind_;
    SparseOperator a_;
    CgOptions opts_;
    std::unique_ptr<Preconditioner> precond_;
};

class GreenPoisson final : public PoissonSolver {
public:
    GreenPoisson(const Grid& grid, std::size_t truncation) : g_(assemble_greens_matrix(grid, truncation)) {}

    SolverKind kind() const noexcept override { return SolverKind::green; }
    bool requires_homogeneous_boundary() const noexcept override { return true; }

    LinSolveStats solve(std::span<const double> rhs, std::span<double> v) const override {
        g_.multiply(rhs, v);
        return {0, 0.0, true, {}};
    }

private:
    GreensMatrix g_;
};

}  // namespace

std::string_view to_string(SolverKind kind) noexcept {
    for (const auto& [k, name] : kSolverNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept {
    for (const auto& [k, n] : kSolverNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string solver_names() {
    std::string out;
    for (const auto& [k, name] : kSolverNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

std::unique_ptr<PoissonSolver> make_poisson_solver(SolverKind kind, const Grid& grid, const PoissonOptions& options) {
    switch (kind) {
        case SolverKind::direct: return std::make_unique<DirectPoisson>(grid);
        case SolverKind::cg:
        case SolverKind::pcg_ilu:
        case SolverKind::pcg_mg: return std::make_unique<CgPoisson>(kind, grid, options);
        case SolverKind::green: return std::make_unique<GreenPoisson>(grid, options.green_truncation);
    }
    throw InvalidArgument("unknown solver kind");
}

}  // namespace ma
