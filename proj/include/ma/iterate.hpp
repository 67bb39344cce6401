#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ma/cases.hpp"
#include "ma/grid.hpp"
#include "ma/poisson.hpp"

namespace ma {

/// Sign of the lumped constant: positive for convex solutions, negative for concave ones.
enum class LambdaSign { convex, concave };

struct LschemeConfig {
    double eta = 1.5;
    double lambda_thresh = 1e8;
    double lambda_floor = 1e-8;
    double delta_tol = 1e-16;
    std::size_t i_max = 1500;
    LambdaSign sign = LambdaSign::convex;
    SolverKind solver = SolverKind::pcg_mg;
    PoissonOptions poisson;

    /// Below this update norm, `stagnation_window` iterations without a new minimum end the run as stagnated.
    double stagnation_level = 1e-12;
    std::size_t stagnation_window = 50;
    /// Newton is declared diverged once ||v||_2 > factor * (1 + ||v^1||_2).
    double newton_divergence_factor = 1e6;

    /// Throws InvalidArgument for eta < 1, i_max < 1 or non-positive tolerances.
    void validate() const;
};

enum class Status { converged, max_iters, stagnated, diverged };

std::string_view to_string(Status s) noexcept;

/// Converged or stagnated at the floating-point floor.
inline bool is_success(Status s) noexcept { return s == Status::converged || s == Status::stagnated; }

struct IterationRecord {
    std::size_t i = 0;
    double update_l2 = 0.0;
    /// Residual of the iterate the step started from.
    double res_l2 = 0.0;
    double res_inf = 0.0;
    /// Lumped constant; NaN for Newton steps.
    double lambda = 0.0;
    std::size_t inner_iters = 0;
    double wall_ms = 0.0;
};

struct ErrorNorms {
    /// ||e||_2 * dx, approximating the L2 norm.
    double l2 = 0.0;
    /// Unscaled vector 2-norm.
    double l2_raw = 0.0;
    double inf = 0.0;
};

struct SolveReport {
    std::string scheme;
    Status status = Status::max_iters;
    std::size_t iterations = 0;
    std::vector<IterationRecord> history;
    Field solution;
    BoundaryData boundary;
    std::optional<ErrorNorms> error;
    double setup_ms = 0.0;
    double total_wall_ms = 0.0;
    /// Reason for divergence, if any.
    std::string message;

    double mean_inner_iterations() const noexcept;
};

/// sign * clamp(min(eta * max(curvature), lambda_thresh), lambda_floor, lambda_thresh).
/// `curvature` is the largest Hessian eigenvalue per node (convex) or minus the smallest one (concave).
double select_lambda(std::span<const double> curvature, const LschemeConfig& cfg);

struct StepResult {
    Field u;
    BoundaryData bc;
    Field update;
    IterationRecord record;
};

/**
 * One fixed-point step: rho = det(D^2 u) - f, Lambda from the Hessian eigenvalues, then
 * (-Delta_h) v = rho / Lambda with v = gamma - u on the boundary, and u <- u + v.
 * Throws InvalidArgument when a homogeneous-only backend meets nonzero boundary updates.
 */
StepResult lscheme_step(const Field& u, const BoundaryData& bc, const ProblemCase& c, const Grid& grid,
                        const LschemeConfig& cfg, const PoissonSolver& solver);

/// Runs the fixed-point iteration with a prepared backend. Solver failures propagate as SolverError.
SolveReport lscheme_solve(const ProblemCase& c, const Grid& grid, Field u0, BoundaryData bc0, const LschemeConfig& cfg,
                          const PoissonSolver& solver);

/// Builds the backend named in cfg (setup time is part of the report) and runs from the given guess.
SolveReport lscheme_solve(const ProblemCase& c, const Grid& grid, const InitialGuess& init, const LschemeConfig& cfg);

/// One Newton step on the 9-point linearised operator, solved by sparse LU.
StepResult newton_step(const Field& u, const BoundaryData& bc, const ProblemCase& c, const Grid& grid);

/// Plain (undamped) Newton iteration. Singular systems, blow-up or non-finite values end as diverged.
SolveReport newton_solve(const ProblemCase& c, const Grid& grid, Field u0, BoundaryData bc0, const LschemeConfig& cfg);
SolveReport newton_solve(const ProblemCase& c, const Grid& grid, const InitialGuess& init, const LschemeConfig& cfg);

struct ContractionFit {
    /// exp(slope) of log ||v^i||_2 against i.
    double rate = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t first = 0;
    std::size_t last = 0;
};

/**
 * Least-squares fit of log ||v^i||_2 over the middle half of the iterations.
 *
 * Only the leading run of updates at or above `floor` is used, so the rounding-noise tail of
 * a stagnated run does not bias the slope. Needs at least 10 such iterations.
 */
ContractionFit fit_contraction(const SolveReport& report, double floor = 1e-12);
double estimate_contraction(const SolveReport& report);

/// Error of the solution against the sampled exact solution.
ErrorNorms error_norms(const Grid& grid, const Field& u, const ProblemCase& c);

}  // namespace ma
