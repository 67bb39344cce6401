#include "ma/iterate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "ma/errors.hpp"
#include "ma/fdops.hpp"
#include "ma/linsolve.hpp"

namespace ma {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool is_zero(const BoundaryData& b) {
    const auto v = b.values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

/// Stopping rules shared by both schemes.
class Monitor {
public:
    explicit Monitor(const LschemeConfig& cfg) : cfg_(cfg) {}

    std::optional<Status> check(double update) {
        if (!std::isfinite(update)) return Status::diverged;
        if (update <= cfg_.delta_tol) return Status::converged;
        if (update < cfg_.stagnation_level) {
            if (update < best_) {
                best_ = update;
                since_best_ = 0;
            } else if (++since_best_ >= cfg_.stagnation_window) {
                return Status::stagnated;
            }
        }
        return std::nullopt;
    }

private:
    const LschemeConfig& cfg_;
    double best_ = std::numeric_limits<double>::infinity();
    std::size_t since_best_ = 0;
};

void finish(SolveReport& report, const Grid& grid, const ProblemCase& c, Clock::time_point start) {
    report.iterations = report.history.size();
    if (c.has_exact() && report.solution.all_finite()) report.error = error_norms(grid, report.solution, c);
    report.total_wall_ms = elapsed_ms(start);
}

void check_start(const Grid& grid, const Field& u0, const BoundaryData& bc0) {
    if (u0.size() != grid.size() || bc0.n() != grid.n()) throw InvalidArgument("initial guess does not match the grid");
}

}  // namespace

void LschemeConfig::validate() const {
    if (!(eta >= 1.0)) throw InvalidArgument("safety parameter eta must be >= 1");
    if (!(lambda_thresh > 0.0)) throw InvalidArgument("lambda_thresh must be positive");
    if (!(lambda_floor > 0.0) || lambda_floor > lambda_thresh) {
        throw InvalidArgument("lambda_floor must be positive and not exceed lambda_thresh");
    }
    if (!(delta_tol > 0.0)) throw InvalidArgument("delta_tol must be positive");
    if (i_max < 1) throw InvalidArgument("i_max must be >= 1");
    if (!(poisson.cg_tol > 0.0)) throw InvalidArgument("inner CG tolerance must be positive");
}

std::string_view to_string(Status s) noexcept {
    switch (s) {
        case Status::converged: return "converged";
        case Status::max_iters: return "max_iters";
        case Status::stagnated: return "stagnated";
        case Status::diverged: return "diverged";
    }
    return "unknown";
}

double SolveReport::mean_inner_iterations() const noexcept {
    if (history.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : history) s += static_cast<double>(r.inner_iters);
    return s / static_cast<double>(history.size());
}

double select_lambda(std::span<const double> curvature, const LschemeConfig& cfg) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : curvature) peak = std::max(peak, v);
    // In two dimensions the bound Lambda >= lambda_M^(d-1) needs no power.
    const double magnitude = std::clamp(std::min(cfg.eta * peak, cfg.lambda_thresh), cfg.lambda_floor, cfg.lambda_thresh);
    return cfg.sign == LambdaSign::convex ? magnitude : -magnitude;
}

StepResult lscheme_step(const Field& u, const BoundaryData& bc, const ProblemCase& c, const Grid& grid,
                        const LschemeConfig& cfg, const PoissonSolver& solver) {
    const auto start = Clock::now();

    const HessianFields h = second_derivatives(grid, u, bc);
    const Field det = hessian_det(h);
    const Field tau = hessian_trace(h);
    Field rho = det;
    rho -= rhs_at_iterate(grid, u, bc, c);

    Field curvature = lambda_max(tau, det);
    if (cfg.sign == LambdaSign::concave) {
        // Concave iterates are governed by the most negative eigenvalue, lambda_m = tau - lambda_M.
        for (std::size_t i = 0; i < curvature.size(); ++i) curvature[i] = curvature[i] - tau[i];
    }
    const double lambda = select_lambda(curvature.values(), cfg);

    const BoundaryData gamma = sample_boundary(grid, c.gamma);
    const BoundaryData vb = gamma - bc;
    const bool homogeneous = is_zero(vb);
    if (!homogeneous && solver.requires_homogeneous_boundary()) {
        throw InvalidArgument(std::string(to_string(solver.kind())) +
                              " backend needs an iterate that matches the boundary data (gamma - u = 0 on the boundary)");
    }

    Field rhs = rho;
    rhs *= 1.0 / lambda;
    if (!homogeneous) rhs += laplacian_boundary_rhs(grid, vb);

    Field v(grid);
    const LinSolveStats stats = solver.solve(rhs.values(), v.values());

    StepResult out{u + v, gamma, v, {}};
    out.record.update_l2 = v.norm2();
    out.record.res_l2 = rho.norm2();
    out.record.res_inf = rho.norm_inf();
    out.record.lambda = lambda;
    out.record.inner_iters = stats.iterations;
    out.record.wall_ms = elapsed_ms(start);
    return out;
}

SolveReport lscheme_solve(const ProblemCase& c, const Grid& grid, Field u0, BoundaryData bc0, const LschemeConfig& cfg,
                          const PoissonSolver& solver) {
    cfg.validate();
    check_start(grid, u0, bc0);
    const auto start = Clock::now();

    SolveReport report;
    report.scheme = "lscheme";
    report.solution = std::move(u0);
    report.boundary = std::move(bc0);
    report.status = Status::max_iters;

    Monitor monitor(cfg);
    for (std::size_t i = 1; i <= cfg.i_max; ++i) {
        if (!report.solution.all_finite()) {
            report.status = Status::diverged;
            report.message = "non-finite iterate";
            break;
        }
        StepResult step;
        try {
            step = lscheme_step(report.solution, report.boundary, c, grid, cfg, solver);
        } catch (const InconsistencyError& e) {
            report.status = Status::diverged;
            report.message = e.what();
            break;
        } catch (const NonFiniteError& e) {
            report.status = Status::diverged;
            report.message = e.what();
            break;
        } catch (const SolverError& e) {
            throw SolverError(e.kind(), "L-scheme iteration " + std::to_string(i) + ": " + e.what());
        }
        step.record.i = i;
        report.history.push_back(step.record);
        report.solution = std::move(step.u);
        report.boundary = std::move(step.bc);
        if (auto status = monitor.check(step.record.update_l2)) {
            report.status = *status;
            if (*status == Status::diverged) report.message = "non-finite update";
            break;
        }
    }
    finish(report, grid, c, start);
    return report;
}

SolveReport lscheme_solve(const ProblemCase& c, const Grid& grid, const InitialGuess& init, const LschemeConfig& cfg) {
    cfg.validate();
    const auto start = Clock::now();
    auto solver = make_poisson_solver(cfg.solver, grid, cfg.poisson);
    const double setup_ms = elapsed_ms(start);
    auto [u0, bc0] = initial_guess(init, c, grid);
    SolveReport report = lscheme_solve(c, grid, std::move(u0), std::move(bc0), cfg, *solver);
    report.setup_ms = setup_ms;
    report.total_wall_ms += setup_ms;
    return report;
}

StepResult newton_step(const Field& u, const BoundaryData& bc, const ProblemCase& c, const Grid& grid) {
    const auto start = Clock::now();

    const HessianFields h = second_derivatives(grid, u, bc);
    Field rho = hessian_det(h);
    rho -= rhs_at_iterate(grid, u, bc, c);

    GradientFields q{Field(grid), Field(grid)};
    if (c.gradient_dependent && c.grad_f_p) {
        const GradientFields g = gradient(grid, u, bc);
        const std::size_t n = grid.n();
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t j = 1; j <= n; ++j) {
                const std::size_t i = grid.index(j, k);
                const Vec2 d = c.grad_f_p(grid.coord(j), grid.coord(k), Vec2{g.ux[i], g.uy[i]});
                q.ux[i] = d.x;
                q.uy[i] = d.y;
            }
        }
    }

    const BoundaryData gamma = sample_boundary(grid, c.gamma);
    const BoundaryData vb = gamma - bc;

    // -(C : D^2 v - q . grad v) = rho, i.e. the Newton system with its sign flipped.
    const SparseOperator a = assemble_newton_operator(grid, h, q);
    Field rhs = rho;
    if (!is_zero(vb)) rhs += newton_boundary_rhs(grid, h, q, vb);

    Field v(grid, solve_nonsymmetric(a, rhs.values()));

    StepResult out{u + v, gamma, v, {}};
    out.record.update_l2 = v.norm2();
    out.record.res_l2 = rho.norm2();
    out.record.res_inf = rho.norm_inf();
    out.record.lambda = std::numeric_limits<double>::quiet_NaN();
    out.record.inner_iters = 0;
    out.record.wall_ms = elapsed_ms(start);
    return out;
}

SolveReport newton_solve(const ProblemCase& c, const Grid& grid, Field u0, BoundaryData bc0, const LschemeConfig& cfg) {
    cfg.validate();
    check_start(grid, u0, bc0);
    const auto start = Clock::now();

    SolveReport report;
    report.scheme = "newton";
    report.solution = std::move(u0);
    report.boundary = std::move(bc0);
    report.status = Status::max_iters;

    Monitor monitor(cfg);
    double first_update = 0.0;
    for (std::size_t i = 1; i <= cfg.i_max; ++i) {
        if (!report.solution.all_finite()) {
            report.status = Status::diverged;
            report.message = "non-finite iterate";
            break;
        }
        StepResult step;
        try {
            step = newton_step(report.solution, report.boundary, c, grid);
        } catch (const SolverError& e) {
            report.status = Status::diverged;
            report.message = std::string("linear solve failed: ") + e.what();
            break;
        } catch (const NonFiniteError& e) {
            report.status = Status::diverged;
            report.message = e.what();
            break;
        }
        step.record.i = i;
        report.history.push_back(step.record);
        report.solution = std::move(step.u);
        report.boundary = std::move(step.bc);

        const double update = step.record.update_l2;
        if (i == 1) first_update = update;
        if (std::isfinite(update) && update > cfg.newton_divergence_factor * (1.0 + first_update)) {
            report.status = Status::diverged;
            report.message = "update norm blew up";
            break;
        }
        if (auto status = monitor.check(update)) {
            report.status = *status;
            if (*status == Status::diverged) report.message = "non-finite update";
            break;
        }
    }
    finish(report, grid, c, start);
    return report;
}

SolveReport newton_solve(const ProblemCase& c, const Grid& grid, const InitialGuess& init, const LschemeConfig& cfg) {
    auto [u0, bc0] = initial_guess(init, c, grid);
    return newton_solve(c, grid, std::move(u0), std::move(bc0), cfg);
}

ContractionFit fit_contraction(const SolveReport& report, double floor) {
    std::size_t usable = 0;
    while (usable < report.history.size() && report.history[usable].update_l2 >= floor &&
           std::isfinite(report.history[usable].update_l2)) {
        ++usable;
    }
    if (usable < 10) {
        throw InvalidArgument("contraction estimate needs at least 10 iterations with update norm >= floor (have " +
                              std::to_string(usable) + ")");
    }
    const std::size_t first = usable / 4;
    const std::size_t last = std::max(first + 2, (3 * usable) / 4);

    const auto count = static_cast<double>(last - first);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        sx += static_cast<double>(i);
        sy += std::log(report.history[i].update_l2);
    }
    const double mx = sx / count;
    const double my = sy / count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const double dx = static_cast<double>(i) - mx;
        const double dy = std::log(report.history[i].update_l2) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ContractionFit fit;
    fit.slope = sxy / sxx;
    fit.rate = std::exp(fit.slope);
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.first = first;
    fit.last = last;
    return fit;
}

double estimate_contraction(const SolveReport& report) { return fit_contraction(report).rate; }

ErrorNorms error_norms(const Grid& grid, const Field& u, const ProblemCase& c) {
    if (!c.has_exact()) throw InvalidArgument("case has no exact solution");
    Field e = u;
    e -= sample_interior(grid, c.exact);
    const double raw = e.norm2();
    return {raw * grid.dx(), raw, e.norm_inf()};
}

}  // namespace ma
