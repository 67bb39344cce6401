#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ma/green.hpp"
#include "ma/grid.hpp"
#include "ma/linsolve.hpp"

namespace ma {

enum class SolverKind { direct, cg, pcg_ilu, pcg_mg, green };

std::string_view to_string(SolverKind kind) noexcept;
std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept;
/// "direct, cg, pcg-ilu, pcg-mg, green"
std::string solver_names();

struct PoissonOptions {
    double cg_tol = 1e-10;
    /// 0 selects 10 n^2.
    std::size_t cg_max_iters = 0;
    std::size_t green_truncation = kGreensDefaultM;
};

/// Solves (-Delta_h) v = rhs for the interior unknowns with the boundary already folded into rhs.
/// Prepared once per grid; solve() does not mutate shared state.
class PoissonSolver {
public:
    virtual ~PoissonSolver() = default;

    virtual SolverKind kind() const noexcept = 0;
    virtual LinSolveStats solve(std::span<const double> rhs, std::span<double> v) const = 0;

    /// True when the backend can only represent zero boundary data for v.
    virtual bool requires_homogeneous_boundary() const noexcept { return false; }
};

/// Builds the backend; setup cost (factorisation, preconditioner, Green's matrix) is paid here.
/// The green backend throws CapacityError for n > kGreensMaxN.
std::unique_ptr<PoissonSolver> make_poisson_solver(SolverKind kind, const Grid& grid, const PoissonOptions& options = {});

}  // namespace ma
