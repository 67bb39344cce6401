#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "ma/grid.hpp"

using namespace ma;

TEST_CASE("grid spacing and node coordinates") {
    const Grid g2(2);
    CHECK(g2.dx() == doctest::Approx(1.0 / 3.0));
    CHECK(g2.coord(1) == doctest::Approx(1.0 / 3.0));
    CHECK(g2.coord(2) == doctest::Approx(2.0 / 3.0));
    CHECK(g2.size() == 4);

    const Grid g1(1);
    CHECK(g1.size() == 1);
    CHECK(g1.coord(1) == 0.5);

    const Grid g100(100);
    CHECK(g100.dx() == doctest::Approx(1.0 / 101.0));
    CHECK(g100.index(1, 1) == 0);
    CHECK(g100.index(100, 100) == 9999);
    CHECK(g100.index(2, 1) == 1);
    CHECK(g100.index(1, 2) == 100);
}

TEST_CASE("zero grid size is rejected") { CHECK_THROWS_AS(Grid(0), InvalidArgument); }

TEST_CASE("index and node_of are inverse bijections") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(1, 64);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g(pick(rng));
        std::set<std::size_t> seen;
        for (std::size_t k = 1; k <= g.n(); ++k) {
            for (std::size_t j = 1; j <= g.n(); ++j) {
                const auto idx = g.index(j, k);
                REQUIRE(idx < g.size());
                seen.insert(idx);
                const auto [jj, kk] = g.node_of(idx);
                CHECK(jj == j);
                CHECK(kk == k);
            }
        }
        CHECK(seen.size() == g.size());
    }
}

TEST_CASE("sample_interior") {
    SUBCASE("zero function") {
        const Field f = sample_interior(Grid(4), [](double, double) { return 0.0; });
        for (double v : f.values()) CHECK(v == 0.0);
    }
    SUBCASE("x + y on one node") {
        const Field f = sample_interior(Grid(1), [](double x, double y) { return x + y; });
        CHECK(f.vec() == std::vector<double>{1.0});
    }
    SUBCASE("xy in lexicographic order") {
        const Field f = sample_interior(Grid(2), [](double x, double y) { return x * y; });
        REQUIRE(f.size() == 4);
        CHECK(f[0] == doctest::Approx(1.0 / 9.0));
        CHECK(f[1] == doctest::Approx(2.0 / 9.0));
        CHECK(f[2] == doctest::Approx(2.0 / 9.0));
        CHECK(f[3] == doctest::Approx(4.0 / 9.0));
    }
    SUBCASE("read-back reproduces the function exactly") {
        const Grid g(13);
        const ScalarFn fn = [](double x, double y) { return std::sin(3.0 * x) * std::exp(y); };
        const Field f = sample_interior(g, fn);
        for (std::size_t k = 1; k <= g.n(); ++k) {
            for (std::size_t j = 1; j <= g.n(); ++j) CHECK(f.at(j, k) == fn(g.coord(j), g.coord(k)));
        }
    }
    SUBCASE("non-finite values name the node") {
        const Grid g(3);
        try {
            (void)sample_interior(g, [](double x, double y) { return (x == 0.5 && y == 0.75) ? std::nan("") : 1.0; });
            FAIL("expected NonFiniteError");
        } catch (const NonFiniteError& e) {
            CHECK(e.j() == 2);
            CHECK(e.k() == 3);
        }
    }
}

TEST_CASE("sample_boundary") {
    SUBCASE("constant one has 4(n+1) nodes") {
        const BoundaryData b = sample_boundary(Grid(2), [](double, double) { return 1.0; });
        CHECK(b.size() == 12);
        for (double v : b.values()) CHECK(v == 1.0);
    }
    SUBCASE("zero function") {
        const BoundaryData b = sample_boundary(Grid(5), [](double, double) { return 0.0; });
        CHECK(b.norm_inf() == 0.0);
    }
    SUBCASE("g = x on one interior node") {
        const BoundaryData b = sample_boundary(Grid(1), [](double x, double) { return x; });
        CHECK(b.at(0, 0) == 0.0);
        CHECK(b.at(2, 0) == 1.0);
        CHECK(b.at(1, 0) == 0.5);
        CHECK(b.at(1, 2) == 0.5);
        CHECK(b.at(0, 1) == 0.0);
        CHECK(b.at(2, 1) == 1.0);
        CHECK(b.at(2, 2) == 1.0);
    }
    SUBCASE("interior nodes are not boundary slots") { CHECK_THROWS(BoundaryData(Grid(3)).at(2, 2)); }
}

TEST_CASE("field arithmetic and norms") {
    const Grid g(2);
    Field a(g, std::vector<double>{1.0, -2.0, 3.0, -4.0});
    const Field b(g, 1.0);
    CHECK(a.norm_inf() == 4.0);
    CHECK(a.norm2() == doctest::Approx(std::sqrt(30.0)));
    CHECK((a + b).vec() == std::vector<double>{2.0, -1.0, 4.0, -3.0});
    CHECK((a - b).vec() == std::vector<double>{0.0, -3.0, 2.0, -5.0});
    CHECK((2.0 * a).vec() == std::vector<double>{2.0, -4.0, 6.0, -8.0});
    CHECK(a.all_finite());
    a[1] = std::nan("");
    CHECK_FALSE(a.all_finite());
    CHECK_THROWS_AS(Field(g) += Field(Grid(3)), InvalidArgument);
}

TEST_CASE("padded layout combines interior and boundary") {
    const Grid g(2);
    const ScalarFn fn = [](double x, double y) { return 10.0 * x + y; };
    const auto full = padded(sample_interior(g, fn), sample_boundary(g, fn));
    const std::size_t m = 4;
    REQUIRE(full.size() == m * m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) CHECK(full[k * m + j] == doctest::Approx(fn(g.coord(j), g.coord(k))));
    }
}

TEST_CASE("field csv lists every node") {
    const Grid g(1);
    const ScalarFn fn = [](double x, double y) { return x + 2.0 * y; };
    std::ostringstream os;
    write_field_csv(os, g, sample_interior(g, fn), sample_boundary(g, fn));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,u");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 9);
    CHECK(os.str().find("0.5,0.5,1.5") != std::string::npos);
}
