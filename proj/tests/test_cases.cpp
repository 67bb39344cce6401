#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ma/cases.hpp"
#include "ma/errors.hpp"
#include "ma/fdops.hpp"

using namespace ma;

namespace {

// Independent evaluation of det(D^2 u) for u = -exp(-r^2/(2 s^2)).
double gaussian_det(double x, double y, double s, Point mu) {
    const double dx = x - mu.x, dy = y - mu.y, r2 = dx * dx + dy * dy;
    const double u = -std::exp(-r2 / (2.0 * s * s));
    // u_xx = -u (dx^2/s^4 - 1/s^2), u_xy = -u dx dy / s^4
    const double uxx = -u * (dx * dx / std::pow(s, 4) - 1.0 / (s * s));
    const double uyy = -u * (dy * dy / std::pow(s, 4) - 1.0 / (s * s));
    const double uxy = -u * dx * dy / std::pow(s, 4);
    return uxx * uyy - uxy * uxy;
}

}  // namespace

TEST_CASE("gaussian right-hand side") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    CHECK(c.f(0.5, 0.5, {}) == doctest::Approx(1.0).epsilon(1e-14));
    // u(0,0)^2 = exp(-1/2), not exp(-1).
    CHECK(c.f(0.0, 0.0, {}) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(c.exact(0.5, 0.5) == -1.0);
    CHECK_FALSE(c.gradient_dependent);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), y = u(rng);
        CHECK(c.f(x, y, {}) == doctest::Approx(gaussian_det(x, y, 1.0, {0.5, 0.5})).epsilon(1e-12));
        CHECK(c.gamma(x, y) == c.exact(x, y));
    }
}

TEST_CASE("gaussian rejects sigma smaller than the corner distance") {
    CHECK_THROWS_AS(gaussian_case(0.3, {0.5, 0.5}, false), InvalidArgument);
    CHECK_NOTHROW(gaussian_case(std::sqrt(0.5) + 1e-9, {0.5, 0.5}, false));
}

TEST_CASE("gradient-dependent gaussian reproduces f at the exact gradient") {
    const Point mu{0.4, 0.55};
    const ProblemCase plain = gaussian_case(1.0, mu, false);
    const ProblemCase gd = gaussian_case(1.0, mu, true);
    CHECK(gd.gradient_dependent);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng);
        const Vec2 p = gd.exact_gradient(x, y);
        CHECK(gd.f(x, y, p) == doctest::Approx(plain.f(x, y, {})).epsilon(1e-12));
    }
}

TEST_CASE("gradient of f with respect to p matches finite differences") {
    const ProblemCase gd = gaussian_case(1.0, {0.5, 0.5}, true);
    const double hstep = 1e-6;
    for (const Vec2 p : {Vec2{0.1, -0.2}, Vec2{0.7, 0.3}, Vec2{0.0, 0.0}}) {
        const Vec2 g = gd.grad_f_p(0.3, 0.8, p);
        const double fx = (gd.f(0.3, 0.8, {p.x + hstep, p.y}) - gd.f(0.3, 0.8, {p.x - hstep, p.y})) / (2.0 * hstep);
        const double fy = (gd.f(0.3, 0.8, {p.x, p.y + hstep}) - gd.f(0.3, 0.8, {p.x, p.y - hstep})) / (2.0 * hstep);
        CHECK(g.x == doctest::Approx(fx).epsilon(1e-6));
        CHECK(g.y == doctest::Approx(fy).epsilon(1e-6));
    }
}

TEST_CASE("oscillating case") {
    SUBCASE("zero amplitude is the gaussian") {
        const ProblemCase g = gaussian_case(1.0, {0.5, 0.5}, false);
        const ProblemCase o = oscillating_case(1.0, {0.5, 0.5}, 0.0, 12);
        for (double x : {0.0, 0.13, 0.5, 0.91}) {
            for (double y : {0.0, 0.27, 0.77, 1.0}) {
                CHECK(o.f(x, y, {}) == doctest::Approx(g.f(x, y, {})).epsilon(1e-14));
                CHECK(o.exact(x, y) == doctest::Approx(g.exact(x, y)).epsilon(1e-14));
            }
        }
    }
    SUBCASE("f is the determinant of the exact Hessian") {
        const double eps = 2e-4;
        const int l = 6;
        const ProblemCase o = oscillating_case(1.0, {0.5, 0.5}, eps, l);
        const double h = 1e-4;
        for (double x : {0.2, 0.45, 0.83}) {
            for (double y : {0.15, 0.6}) {
                const auto u = [&](double a, double b) { return o.exact(a, b); };
                const double uxx = (u(x + h, y) - 2.0 * u(x, y) + u(x - h, y)) / (h * h);
                const double uyy = (u(x, y + h) - 2.0 * u(x, y) + u(x, y - h)) / (h * h);
                const double uxy = (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)) / (4.0 * h * h);
                CHECK(o.f(x, y, {}) == doctest::Approx(uxx * uyy - uxy * uxy).epsilon(1e-5));
            }
        }
    }
    SUBCASE("large amplitude is rejected") { CHECK_THROWS_AS(oscillating_case(1.0, {0.5, 0.5}, 0.5, 12), InvalidArgument); }
    SUBCASE("eps 1e-3 with l = 12 makes f negative near the corners") {
        CHECK_THROWS_AS(oscillating_case(1.0, {0.5, 0.5}, 1e-3, 12), InvalidArgument);
    }
    SUBCASE("f tends to the gaussian as eps shrinks") {
        const ProblemCase g = gaussian_case(1.0, {0.5, 0.5}, false);
        double prev = 1e300;
        for (double eps : {1e-4, 1e-5, 1e-6}) {
            const ProblemCase o = oscillating_case(1.0, {0.5, 0.5}, eps, 12);
            const double gap = std::abs(o.f(0.31, 0.42, {}) - g.f(0.31, 0.42, {}));
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("quadratic case") {
    const ProblemCase q = quadratic_case();
    CHECK(q.f(0.3, 0.9, {}) == 1.0);
    CHECK(q.exact(1.0, 1.0) == 1.0);
    CHECK(sample_rhs_minimum(q, 20).value == 1.0);
}

TEST_CASE("initial guesses") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const Grid g(9);  // node (5,5) is the centre
    const std::size_t centre = g.index(5, 5);

    const auto [conv, bc1] = initial_guess(InitialGuess::convex(30.0), c, g);
    CHECK(conv[centre] == doctest::Approx(-2.875).epsilon(1e-14));
    const auto [sad, bc2] = initial_guess(InitialGuess::saddle(10.0), c, g);
    CHECK(sad[centre] == doctest::Approx(-0.375).epsilon(1e-14));

    const auto [zero, bc3] = initial_guess(InitialGuess::convex(0.0), c, g);
    const Field ex = sample_interior(g, c.exact);
    CHECK(zero.vec() == ex.vec());
    const BoundaryData gb = sample_boundary(g, c.gamma);
    CHECK(std::equal(bc3.values().begin(), bc3.values().end(), gb.values().begin()));

    ProblemCase no_exact = c;
    no_exact.exact = {};
    CHECK_THROWS_AS(initial_guess(InitialGuess::convex(1.0), no_exact, g), InvalidArgument);
}

TEST_CASE("residual of the sampled exact solution is second order") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    double prev = 0.0;
    for (std::size_t n : {25u, 50u, 100u}) {
        const Grid g(n);
        const Field rho = residual(g, sample_interior(g, c.exact), sample_boundary(g, c.gamma), c);
        if (prev > 0.0) {
            const double ratio = prev / rho.norm_inf();
            CHECK(ratio > 3.0);
            CHECK(ratio < 5.0);
        }
        prev = rho.norm_inf();
    }
    const Grid g(50);
    const auto [u0, bc] = initial_guess(InitialGuess::convex(30.0), c, g);
    CHECK(residual(g, u0, bc, c).norm_inf() > 0.0);
}
