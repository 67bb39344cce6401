#include <doctest.h>

#include <cmath>
#include <random>

#include "ma/cases.hpp"
#include "ma/errors.hpp"
#include "ma/fdops.hpp"
#include "ma/green.hpp"
#include "ma/iterate.hpp"
#include "ma/linsolve.hpp"

using namespace ma;

namespace {

double gap_to_fd(const Grid& g, std::size_t m, const Field& rho, double lambda = 1.0) {
    const Field v = apply_greens(assemble_greens_matrix(g, m), rho, lambda);
    const auto fd = direct_solve(assemble_laplacian(g), rho.vec());
    double gap = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) gap = std::max(gap, std::abs(v[i] - fd[i] / lambda));
    return gap;
}

}  // namespace

TEST_CASE("series values") {
    CHECK(greens_value(0.5, 0.5, 0.5, 0.5, 1) == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-15));
    CHECK(greens_value(0.5, 0.5, 0.5, 0.5, 1) == doctest::Approx(0.2026423).epsilon(1e-7));
    CHECK(greens_value(0.0, 0.3, 0.4, 0.6, 50) == 0.0);
    CHECK(greens_value(0.2, 0.3, 1.0, 0.6, 50) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        CHECK(greens_value(a, b, c, d, 50) == doctest::Approx(greens_value(c, d, a, b, 50)).epsilon(1e-13));
    }
}

TEST_CASE("matrix assembly") {
    const GreensMatrix one = assemble_greens_matrix(Grid(1), 50);
    CHECK(one.dim() == 1);
    CHECK(one(0, 0) == doctest::Approx(0.25 * greens_value(0.5, 0.5, 0.5, 0.5, 50)).epsilon(1e-15));

    const GreensMatrix ten = assemble_greens_matrix(Grid(10), 50);
    for (std::size_t a = 0; a < ten.dim(); ++a) {
        CHECK(ten(a, a) > 0.0);
        for (std::size_t b = 0; b < a; ++b) CHECK(std::abs(ten(a, b) - ten(b, a)) <= 1e-12 * std::abs(ten(a, b)));
    }
    CHECK_THROWS_AS(assemble_greens_matrix(Grid(101), 50), CapacityError);
    CHECK_NOTHROW(assemble_greens_matrix(Grid(kGreensMaxN), 1));
}

TEST_CASE("application") {
    const Grid g(12);
    const GreensMatrix gm = assemble_greens_matrix(g, 30);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field rho(g);
    for (auto& v : rho.values()) v = u(rng);

    const Field zero = apply_greens(gm, Field(g), 2.0);
    for (double v : zero.values()) CHECK(v == 0.0);
    const Field v1 = apply_greens(gm, rho, 3.0);
    const Field v2 = apply_greens(gm, 2.0 * rho, 3.0);
    const Field v3 = apply_greens(gm, rho, 6.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(v2[i] == doctest::Approx(2.0 * v1[i]).epsilon(1e-13));
        CHECK(v3[i] == doctest::Approx(0.5 * v1[i]).epsilon(1e-13));
    }
    CHECK_THROWS_AS(apply_greens(gm, rho, 0.0), InvalidArgument);
}

TEST_CASE("agreement with the finite-difference solve") {
    const ProblemCase c = gaussian_case(1.0, {0.5, 0.5}, false);
    const Grid g(50);
    const auto [u0, bc] = initial_guess(InitialGuess::convex(30.0), c, g);
    const Field rho = residual(g, u0, bc, c);
    const auto h = second_derivatives(g, u0, bc);
    const double lambda = select_lambda(lambda_max(hessian_trace(h), hessian_det(h)).values(), LschemeConfig{});
    const double gap = gap_to_fd(g, 50, rho, lambda);
    MESSAGE("green vs fd gap " << gap);
    CHECK(gap < 1e-3);

    // A positive source gives a positive potential for -Delta.
    const Field ones(g, 1.0);
    const Field pot = apply_greens(assemble_greens_matrix(g, 50), ones, 1.0);
    for (double v : pot.values()) CHECK(v > 0.0);
}

TEST_CASE("larger truncation order does not increase the gap") {
    const Grid g(40);
    const Field rho = sample_interior(g, [](double x, double y) { return std::exp(x) * (1.0 + y * y); });
    double prev = 1e300;
    for (std::size_t m : {10u, 25u, 50u}) {
        const double gap = gap_to_fd(g, m, rho);
        CAPTURE(m);
        CHECK(gap <= prev);
        prev = gap;
    }
}
