#include <doctest.h>

#include <cmath>
#include <vector>

#include "ma/cases.hpp"
#include "ma/errors.hpp"
#include "ma/fdops.hpp"
#include "ma/iterate.hpp"

using namespace ma;

namespace {

SolveReport synthetic(const std::vector<double>& updates) {
    SolveReport r;
    for (std::size_t i = 0; i < updates.size(); ++i) {
        IterationRecord rec;
        rec.i = i + 1;
        rec.update_l2 = updates[i];
        r.history.push_back(rec);
    }
    r.iterations = updates.size();
    return r;
}

LschemeConfig direct_cfg() {
    LschemeConfig cfg;
    cfg.solver = SolverKind::direct;
    return cfg;
}

}  // namespace

TEST_CASE("select_lambda") {
    LschemeConfig cfg;
    const std::vector<double> three{1.0, 3.0, -5.0};
    CHECK(select_lambda(three, cfg) == doctest::Approx(4.5));
    cfg.lambda_thresh = 4.0;
    CHECK(select_lambda(three, cfg) == 4.0);
    cfg.lambda_thresh = 1e8;
    const std::vector<double> concave{-2.0, -3.0};
    CHECK(select_lambda(concave, cfg) == 1e-8);
    cfg.sign = LambdaSign::concave;
    CHECK(select_lambda(concave, cfg) == -1e-8);
    CHECK(select_lambda(three, cfg) == doctest::Approx(-4.5));
}

TEST_CASE("config validation") {
    LschemeConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.eta = 0.9;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.i_max = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.delta_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("a discrete solution is a fixed point") {
    const ProblemCase q = quadratic_case();
    const Grid g(20);
    LschemeConfig cfg = direct_cfg();
    cfg.delta_tol = 1e-12;
    const SolveReport r = lscheme_solve(q, g, InitialGuess::exact_solution(), cfg);
    REQUIRE_FALSE(r.history.empty());
    CHECK(r.history.front().update_l2 <= 1e-12);
    CHECK(r.status == Status::converged);
    CHECK(r.iterations <= 2);
    CHECK(r.error->inf <= 1e-12);
}

TEST_CASE("first step from the convex bump matches an independent computation") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const Grid g(50);
    const auto [u0, bc] = initial_guess(InitialGuess::convex(30.0), c, g);
    const LschemeConfig cfg = direct_cfg();
    const auto solver = make_poisson_solver(SolverKind::direct, g);
    const StepResult s = lscheme_step(u0, bc, c, g, cfg, *solver);
    CHECK(s.record.res_inf == doctest::Approx(774.3182209371).epsilon(1e-9));
    CHECK(s.record.update_l2 == doctest::Approx(6.537339096586).epsilon(1e-9));
    CHECK(s.record.lambda == doctest::Approx(44.46061019752).epsilon(1e-9));
    CHECK(s.record.update_l2 > 0.0);
    CHECK(residual(g, s.u, s.bc, c).norm2() < residual(g, u0, bc, c).norm2());
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(s.u[i] == doctest::Approx(u0[i] + s.update[i]).epsilon(1e-15));
}

TEST_CASE("max-norm residual after one step from the convex bump") {
    // Reference expectation: the max-norm residual decreases after one step.
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const Grid g(50);
    const auto [u0, bc] = initial_guess(InitialGuess::convex(30.0), c, g);
    const auto solver = make_poisson_solver(SolverKind::direct, g);
    const StepResult s = lscheme_step(u0, bc, c, g, direct_cfg(), *solver);
    CHECK(residual(g, s.u, s.bc, c).norm_inf() < residual(g, u0, bc, c).norm_inf());
}

TEST_CASE("concave sign is the mirror image of the convex step") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    ProblemCase m = c;
    m.gamma = [c](double x, double y) { return -c.gamma(x, y); };
    m.exact = [c](double x, double y) { return -c.exact(x, y); };
    const Grid g(20);
    const auto [u0, bc] = initial_guess(InitialGuess::convex(5.0), c, g);
    const auto [w0, wbc] = initial_guess(InitialGuess::saddle(5.0), m, g);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(w0[i] == doctest::Approx(-u0[i]).epsilon(1e-15));

    LschemeConfig convex = direct_cfg();
    LschemeConfig concave = convex;
    concave.sign = LambdaSign::concave;
    const auto solver = make_poisson_solver(SolverKind::direct, g);
    const StepResult a = lscheme_step(u0, bc, c, g, convex, *solver);
    const StepResult b = lscheme_step(w0, wbc, m, g, concave, *solver);
    CHECK(b.record.lambda == doctest::Approx(-a.record.lambda).epsilon(1e-14));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(b.update[i] == doctest::Approx(-a.update[i]).epsilon(1e-10));
}

TEST_CASE("lumped constant stays at or above the floor") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    LschemeConfig cfg = direct_cfg();
    cfg.i_max = 40;
    const SolveReport r = lscheme_solve(c, Grid(20), InitialGuess::convex(30.0), cfg);
    for (const auto& rec : r.history) CHECK(rec.lambda >= cfg.lambda_floor);
}

TEST_CASE("green backend needs homogeneous boundary updates") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const Grid g(10);
    auto [u0, bc] = initial_guess(InitialGuess::convex(1.0), c, g);
    const auto green = make_poisson_solver(SolverKind::green, g);
    CHECK_NOTHROW(lscheme_step(u0, bc, c, g, direct_cfg(), *green));
    bc.values()[0] += 0.1;
    CHECK_THROWS_AS(lscheme_step(u0, bc, c, g, direct_cfg(), *green), InvalidArgument);
}

TEST_CASE("Gaussian run succeeds and updates decay") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    LschemeConfig cfg;
    const SolveReport r = lscheme_solve(c, Grid(30), InitialGuess::convex(30.0), cfg);
    CHECK(is_success(r.status));
    CHECK(r.iterations < cfg.i_max);
    CHECK(r.error->inf < 1e-4);
    CHECK(r.mean_inner_iterations() > 0.0);
    // Over windows of ten iterations the update shrinks until it reaches rounding level.
    const auto& h = r.history;
    for (std::size_t i = 10; i < h.size() && h[i].update_l2 > 1e-10; ++i) CHECK(h[i].update_l2 < h[i - 10].update_l2);
}

TEST_CASE("contraction estimate") {
    std::vector<double> geo, flat;
    for (int i = 0; i < 40; ++i) {
        geo.push_back(std::pow(0.5, i));
        flat.push_back(3.0);
    }
    const ContractionFit f = fit_contraction(synthetic(geo), 0.0);
    CHECK(f.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(estimate_contraction(synthetic(flat)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(estimate_contraction(synthetic({1.0, 0.5, 0.25})), InvalidArgument);
}

TEST_CASE("Newton on a mild perturbation") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const SolveReport r = newton_solve(c, Grid(20), InitialGuess::convex(0.1), LschemeConfig{});
    CHECK(is_success(r.status));
    CHECK(r.error->inf < 1e-3);
    CHECK(std::isnan(r.history.front().lambda));
    // Quadratic convergence: the first few updates shrink faster than any fixed ratio.
    REQUIRE(r.history.size() > 4);
    CHECK(r.history[3].update_l2 < 1e-6 * r.history[0].update_l2);
}

TEST_CASE("Newton with gradient dependence") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, true);
    const SolveReport r = newton_solve(c, Grid(20), InitialGuess::convex(0.1), LschemeConfig{});
    CHECK(is_success(r.status));
    CHECK(r.error->inf < 1e-3);
}

TEST_CASE("error norms") {
    const ProblemCase q = quadratic_case();
    const Grid g(3);
    Field u = sample_interior(g, q.exact);
    u[4] += 0.5;
    const ErrorNorms e = error_norms(g, u, q);
    CHECK(e.inf == doctest::Approx(0.5));
    CHECK(e.l2_raw == doctest::Approx(0.5));
    CHECK(e.l2 == doctest::Approx(0.5 * 0.25));
}
