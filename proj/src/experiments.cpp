#include "ma/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "ma/errors.hpp"
#include "ma/report_io.hpp"

namespace ma {

namespace {

constexpr std::string_view kCaseNames[] = {"gaussian", "gaussian-curvature", "oscillating", "quadratic"};

double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw InvalidArgument("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string na_or(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "NA"; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MA_BENCH_THREADS")) {
        std::size_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) cap = v;
    }
    return cap;
}

struct Cell {
    std::size_t n;
    Scheme scheme;
    SolverKind solver;
};

SweepRow run_cell(const ExperimentConfig& cfg, const ProblemCase& c, const Cell& cell) {
    SweepRow row;
    row.n = cell.n;
    row.scheme = cell.scheme;
    row.solver = cell.scheme == Scheme::newton ? "lu" : std::string(to_string(cell.solver));
    std::vector<double> wall;
    std::vector<double> setup;
    try {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            const SolveReport report = run_single(cfg, c, cell.n, cell.scheme, cell.solver);
            wall.push_back(report.total_wall_ms);
            setup.push_back(report.setup_ms);
            if (rep == 0) {
                row.status = std::string(to_string(report.status));
                row.iterations = report.iterations;
                row.error = report.error;
                row.mean_inner_iters = report.mean_inner_iterations();
                row.message = report.message;
            }
        }
        row.total_wall_ms = median(wall);
        row.setup_ms = median(setup);
    } catch (const CapacityError& e) {
        row.status = "capacity_error";
        row.message = e.what();
    } catch (const SolverError& e) {
        row.status = "solver_error";
        row.message = e.what();
    } catch (const InvalidArgument& e) {
        row.status = "invalid_argument";
        row.message = e.what();
    } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
    }
    if (row.status.find("error") != std::string::npos || row.status == "invalid_argument") {
        row.iterations.reset();
        row.error.reset();
        row.total_wall_ms = std::nan("");
        row.setup_ms = std::nan("");
        row.mean_inner_iters = std::nan("");
    }
    return row;
}

/// Runs f(i) for i in [0, count) on at most thread_cap() threads.
template <typename F>
void parallel_for(std::size_t count, F&& f) {
    const std::size_t workers = std::min(count, thread_cap());
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

int usage_error(std::ostream& log, const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw InvalidArgument("cannot write " + (dir / name).string());
    os << std::setprecision(17);
    return os;
}

}  // namespace

std::string_view to_string(Scheme s) noexcept { return s == Scheme::newton ? "newton" : "lscheme"; }

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
    if (name == "lscheme") return Scheme::lscheme;
    if (name == "newton") return Scheme::newton;
    return std::nullopt;
}

std::string case_names() {
    std::string out;
    for (auto name : kCaseNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

InitialGuess parse_init(std::string_view text) {
    if (text == "exact") return InitialGuess::exact_solution();
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    if (colon == std::string_view::npos || (kind != "convex" && kind != "saddle")) {
        throw InvalidArgument("initial guess must be convex:C, saddle:C or exact, got '" + std::string(text) + "'");
    }
    const double c = parse_double(text.substr(colon + 1), "initial-guess constant");
    return kind == "convex" ? InitialGuess::convex(c) : InitialGuess::saddle(c);
}

std::string to_string(const InitialGuess& g) {
    switch (g.kind) {
        case GuessKind::convex_bump: return "convex:" + csv_number(g.constant);
        case GuessKind::saddle_bump: return "saddle:" + csv_number(g.constant);
        case GuessKind::exact: return "exact";
        case GuessKind::custom: return "custom";
    }
    return "unknown";
}

std::vector<std::size_t> parse_sizes(std::string_view list) {
    std::vector<std::size_t> out;
    for (auto item : split(list, ',')) {
        const double v = parse_double(item, "grid size");
        if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw InvalidArgument("grid sizes must be positive integers, got '" + std::string(item) + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

Point parse_point(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw InvalidArgument("expected X,Y, got '" + std::string(text) + "'");
    return {parse_double(parts[0], "x coordinate"), parse_double(parts[1], "y coordinate")};
}

void ExperimentConfig::validate() const {
    if (sizes.empty()) throw InvalidArgument("no grid sizes given");
    for (auto n : sizes) {
        if (n == 0) throw InvalidArgument("grid sizes must be positive");
    }
    if (schemes.empty()) throw InvalidArgument("no scheme given");
    if (solvers.empty()) throw InvalidArgument("no solver given");
    if (reps < 1) throw InvalidArgument("reps must be >= 1");
    iteration.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["case"] = case_name;
    j["sigma"] = sigma;
    j["mu"] = {mu.x, mu.y};
    if (case_name == "oscillating") {
        j["eps_s"] = eps_s;
        j["l"] = l;
    }
    j["n"] = sizes;
    std::vector<std::string> scheme_names;
    for (auto s : schemes) scheme_names.emplace_back(to_string(s));
    j["scheme"] = scheme_names;
    std::vector<std::string> solver_list;
    for (auto s : solvers) solver_list.emplace_back(to_string(s));
    j["solver"] = solver_list;
    j["green_m"] = iteration.poisson.green_truncation;
    j["init"] = to_string(init);
    j["eta"] = iteration.eta;
    j["tol"] = iteration.delta_tol;
    j["max_iters"] = iteration.i_max;
    j["lambda_thresh"] = iteration.lambda_thresh;
    j["sign"] = iteration.sign == LambdaSign::convex ? "convex" : "concave";
    j["reps"] = reps;
    return j;
}

ProblemCase make_case(const ExperimentConfig& cfg) {
    if (cfg.case_name == "gaussian") return gaussian_case(cfg.sigma, cfg.mu, false);
    if (cfg.case_name == "gaussian-curvature") return gaussian_case(cfg.sigma, cfg.mu, true);
    if (cfg.case_name == "oscillating") return oscillating_case(cfg.sigma, cfg.mu, cfg.eps_s, cfg.l);
    if (cfg.case_name == "quadratic") return quadratic_case();
    throw InvalidArgument("unknown case '" + cfg.case_name + "'; valid cases: " + case_names());
}

SolveReport run_single(const ExperimentConfig& cfg, const ProblemCase& c, std::size_t n, Scheme scheme, SolverKind solver) {
    const Grid grid(n);
    LschemeConfig it = cfg.iteration;
    it.solver = solver;
    if (scheme == Scheme::newton) return newton_solve(c, grid, cfg.init, it);
    return lscheme_solve(c, grid, cfg.init, it);
}

bool SweepRow::ok() const { return status == "converged" || status == "stagnated"; }

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemCase c = make_case(cfg);
    std::vector<Cell> cells;
    for (auto n : cfg.sizes) {
        for (auto scheme : cfg.schemes) {
            if (scheme == Scheme::newton) {
                cells.push_back({n, scheme, SolverKind::direct});
                continue;
            }
            for (auto solver : cfg.solvers) cells.push_back({n, scheme, solver});
        }
    }
    std::vector<SweepRow> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) { rows[i] = run_cell(cfg, c, cells[i]); });
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "n,scheme,solver,status,iterations,total_wall_ms,setup_ms,error_l2,error_l2_raw,error_inf,mean_inner_iters\n";
    const double nan = std::nan("");
    for (const auto& r : rows) {
        os << r.n << ',' << to_string(r.scheme) << ',' << r.solver << ',' << r.status << ',' << na_or(r.iterations) << ','
           << csv_number(r.total_wall_ms) << ',' << csv_number(r.setup_ms) << ','
           << csv_number(r.error ? r.error->l2 : nan) << ',' << csv_number(r.error ? r.error->l2_raw : nan) << ','
           << csv_number(r.error ? r.error->inf : nan) << ',' << csv_number(r.mean_inner_iters) << '\n';
    }
}

std::vector<CompareRow> run_compare(const ExperimentConfig& cfg) {
    ExperimentConfig sweep = cfg;
    sweep.schemes = {Scheme::lscheme, Scheme::newton};
    sweep.solvers = {cfg.solvers.front()};
    const auto rows = run_sweep(sweep);
    std::vector<CompareRow> out;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) out.push_back({rows[i].n, rows[i], rows[i + 1]});
    return out;
}

std::vector<InnerRow> run_inner_comparison(const ExperimentConfig& cfg) {
    ExperimentConfig sweep = cfg;
    sweep.schemes = {Scheme::lscheme};
    sweep.solvers = {SolverKind::cg, SolverKind::pcg_ilu, SolverKind::pcg_mg};
    sweep.reps = 1;
    const auto rows = run_sweep(sweep);
    const double nan = std::nan("");
    auto mean = [&](const SweepRow& r) { return r.ok() ? r.mean_inner_iters : nan; };
    std::vector<InnerRow> out;
    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
        out.push_back({rows[i].n, mean(rows[i]), mean(rows[i + 1]), mean(rows[i + 2])});
    }
    return out;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
    os << "n,lscheme_status,lscheme_iterations,lscheme_wall_ms,lscheme_error_inf,"
          "newton_status,newton_iterations,newton_wall_ms,newton_error_inf\n";
    const double nan = std::nan("");
    for (const auto& r : rows) {
        os << r.n;
        for (const SweepRow* s : {&r.lscheme, &r.newton}) {
            os << ',' << s->status << ',' << na_or(s->iterations) << ',' << csv_number(s->total_wall_ms) << ','
               << csv_number(s->error ? s->error->inf : nan);
        }
        os << '\n';
    }
}

void write_inner_csv(std::ostream& os, const std::vector<InnerRow>& rows) {
    os << "n,cg_mean_inner,pcg_ilu_mean_inner,pcg_mg_mean_inner,mg_over_cg\n";
    for (const auto& r : rows) {
        os << r.n << ',' << csv_number(r.cg) << ',' << csv_number(r.pcg_ilu) << ',' << csv_number(r.pcg_mg) << ','
           << csv_number(r.pcg_mg / r.cg) << '\n';
    }
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
    SolveReport report;
    try {
        cfg.validate();
        if (cfg.sizes.size() != 1) throw InvalidArgument("run takes a single grid size");
        if (cfg.schemes.size() != 1 || cfg.solvers.size() != 1) throw InvalidArgument("run takes a single scheme and solver");
        const ProblemCase c = make_case(cfg);
        report = run_single(cfg, c, cfg.sizes.front(), cfg.schemes.front(), cfg.solvers.front());
    } catch (const InvalidArgument& e) {
        return usage_error(log, e);
    } catch (const CapacityError& e) {
        return usage_error(log, e);
    } catch (const SolverError& e) {
        log << "solver failure: " << e.what() << '\n';
        return 2;
    }

    const Grid grid(cfg.sizes.front());
    auto json_out = open_output(cfg.out, "report.json");
    write_report_json(json_out, report, cfg.to_json());
    auto history_out = open_output(cfg.out, "history.csv");
    write_history_csv(history_out, report);
    auto field_out = open_output(cfg.out, "solution.csv");
    write_field_csv(field_out, grid, report.solution, report.boundary);

    log << "status=" << to_string(report.status) << " iterations=" << report.iterations;
    if (report.error) {
        log << " error_l2=" << csv_number(report.error->l2) << " error_inf=" << csv_number(report.error->inf);
    }
    log << " wall_ms=" << std::fixed << std::setprecision(1) << report.total_wall_ms << std::defaultfloat;
    if (!report.message.empty()) log << " (" << report.message << ')';
    log << '\n';
    return is_success(report.status) ? 0 : 2;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log) {
    std::vector<SweepRow> rows;
    try {
        if (cfg.sizes.size() < 2) throw InvalidArgument("sweep needs at least two grid sizes");
        rows = run_sweep(cfg);
    } catch (const InvalidArgument& e) {
        return usage_error(log, e);
    }
    auto os = open_output(cfg.out, "sweep.csv");
    write_sweep_csv(os, rows);
    for (const auto& r : rows) {
        log << "n=" << r.n << ' ' << to_string(r.scheme) << '/' << r.solver << ": " << r.status;
        if (r.iterations) log << " iterations=" << *r.iterations;
        if (!r.message.empty()) log << " (" << r.message << ')';
        log << '\n';
    }
    return 0;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
    std::vector<CompareRow> rows;
    std::vector<InnerRow> inner;
    try {
        cfg.validate();
        rows = run_compare(cfg);
        inner = run_inner_comparison(cfg);
    } catch (const InvalidArgument& e) {
        return usage_error(log, e);
    }
    auto os = open_output(cfg.out, "compare.csv");
    write_compare_csv(os, rows);
    auto inner_os = open_output(cfg.out, "compare_inner.csv");
    write_inner_csv(inner_os, inner);
    for (const auto& r : rows) {
        log << "n=" << r.n << " lscheme: " << r.lscheme.status << ' ' << na_or(r.lscheme.iterations)
            << " | newton: " << r.newton.status << ' ' << na_or(r.newton.iterations) << '\n';
    }
    for (const auto& r : inner) {
        log << "n=" << r.n << " mean inner iterations cg=" << csv_number(r.cg) << " pcg-ilu=" << csv_number(r.pcg_ilu)
            << " pcg-mg=" << csv_number(r.pcg_mg) << '\n';
    }
    return 0;
}

}  // namespace ma
