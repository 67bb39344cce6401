#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ma/cases.hpp"
#include "ma/iterate.hpp"
#include "ma/poisson.hpp"

namespace ma {

enum class Scheme { lscheme, newton };

std::string_view to_string(Scheme s) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;

/// Names accepted by make_case.
std::string case_names();

/// Parsers for the command-line forms "convex:C", "saddle:C", "exact", "25,50,100" and "X,Y".
InitialGuess parse_init(std::string_view text);
std::vector<std::size_t> parse_sizes(std::string_view list);
Point parse_point(std::string_view text);
std::string to_string(const InitialGuess& g);

struct ExperimentConfig {
    std::string case_name = "gaussian";
    double sigma = 1.0;
    Point mu{0.5, 0.5};
    double eps_s = 1e-3;
    int l = 12;

    std::vector<std::size_t> sizes{50};
    std::vector<Scheme> schemes{Scheme::lscheme};
    std::vector<SolverKind> solvers{SolverKind::pcg_mg};
    InitialGuess init = InitialGuess::convex(30.0);
    LschemeConfig iteration;

    std::filesystem::path out = ".";
    std::size_t reps = 3;

    /// Throws InvalidArgument for empty or zero grid sizes, reps < 1 or a bad iteration config.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Throws InvalidArgument listing the valid names for an unknown case.
ProblemCase make_case(const ExperimentConfig& cfg);

/// One solve. Newton ignores the inner solver.
SolveReport run_single(const ExperimentConfig& cfg, const ProblemCase& c, std::size_t n, Scheme scheme, SolverKind solver);

struct SweepRow {
    std::size_t n = 0;
    Scheme scheme = Scheme::lscheme;
    /// Inner solver name, or "lu" for Newton.
    std::string solver;
    /// A Status name, or capacity_error / solver_error / invalid_argument when the cell could not run.
    std::string status;
    std::optional<std::size_t> iterations;
    double total_wall_ms = 0.0;
    double setup_ms = 0.0;
    std::optional<ErrorNorms> error;
    double mean_inner_iters = 0.0;
    std::string message;

    bool ok() const;
};

/**
 * Runs every (n, scheme, solver) cell; Newton contributes one cell per n.
 *
 * Cells run in parallel on up to MA_BENCH_THREADS threads (default: hardware concurrency).
 * Rows come back in (n, scheme, solver) order. Timings are the median over cfg.reps repetitions;
 * every other column comes from the first repetition.
 */
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// Header: n,scheme,solver,status,iterations,total_wall_ms,setup_ms,error_l2,error_l2_raw,error_inf,mean_inner_iters
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CompareRow {
    std::size_t n = 0;
    SweepRow lscheme;
    SweepRow newton;
};

struct InnerRow {
    std::size_t n = 0;
    /// Mean inner iterations per outer step for cg, pcg-ilu and pcg-mg; NA when the run failed.
    double cg = 0.0;
    double pcg_ilu = 0.0;
    double pcg_mg = 0.0;
};

/// L-scheme (first configured solver) against Newton at every n.
std::vector<CompareRow> run_compare(const ExperimentConfig& cfg);

/// Mean inner CG iterations of the L-scheme with and without preconditioning at every n.
std::vector<InnerRow> run_inner_comparison(const ExperimentConfig& cfg);

/// Header: n,lscheme_status,lscheme_iterations,lscheme_wall_ms,lscheme_error_inf,newton_status,newton_iterations,newton_wall_ms,newton_error_inf
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

/// Header: n,cg_mean_inner,pcg_ilu_mean_inner,pcg_mg_mean_inner,mg_over_cg
void write_inner_csv(std::ostream& os, const std::vector<InnerRow>& rows);

/// Subcommands. Exit codes: 0 success, 1 usage error, 2 a solve ended as max_iters or diverged.
/// Sweep and compare record failed cells in their CSV and still return 0.
int cmd_run(const ExperimentConfig& cfg, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace ma
