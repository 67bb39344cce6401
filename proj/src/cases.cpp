#include "ma/cases.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ma {

namespace {

struct GaussianShape {
    double sigma;
    Point mu;

    double envelope(double x, double y) const {
        const double dx = x - mu.x;
        const double dy = y - mu.y;
        return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
    double value(double x, double y) const { return -envelope(x, y); }
    Vec2 gradient(double x, double y) const {
        const double e = envelope(x, y) / (sigma * sigma);
        return {(x - mu.x) * e, (y - mu.y) * e};
    }
    /// det(D^2 u) = (1 - r^2/sigma^2) u^2 / sigma^4
    double hessian_det(double x, double y) const {
        const double dx = x - mu.x;
        const double dy = y - mu.y;
        const double s2 = sigma * sigma;
        const double u = value(x, y);
        return (1.0 - (dx * dx + dy * dy) / s2) * u * u / (s2 * s2);
    }
    /// Entries (uxx, uyy, uxy) of the Hessian.
    std::array<double, 3> hessian(double x, double y) const {
        const double dx = x - mu.x;
        const double dy = y - mu.y;
        const double s2 = sigma * sigma;
        const double e = envelope(x, y);
        return {e * (1.0 / s2 - dx * dx / (s2 * s2)), e * (1.0 / s2 - dy * dy / (s2 * s2)), -e * dx * dy / (s2 * s2)};
    }
};

void check_gaussian_parameters(double sigma, Point mu) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive and finite");
    if (!std::isfinite(mu.x) || !std::isfinite(mu.y)) throw InvalidArgument("mu must be finite");
    // |x - mu| is convex in x, so its maximum over the square sits at a corner.
    for (double cx : {0.0, 1.0}) {
        for (double cy : {0.0, 1.0}) {
            const double d = std::hypot(cx - mu.x, cy - mu.y);
            if (d > sigma * (1.0 + 1e-14)) {
                std::ostringstream msg;
                msg << "Gaussian case is not elliptic on the unit square: corner (" << cx << "," << cy
                    << ") lies at distance " << d << " > sigma = " << sigma << " from mu";
                throw InvalidArgument(msg.str());
            }
        }
    }
}

}  // namespace

ProblemCase gaussian_case(double sigma, Point mu, bool gradient_dependent) {
    check_gaussian_parameters(sigma, mu);
    const GaussianShape g{sigma, mu};

    ProblemCase c;
    c.gamma = [g](double x, double y) { return g.value(x, y); };
    c.exact = c.gamma;
    c.exact_gradient = [g](double x, double y) { return g.gradient(x, y); };
    c.gradient_dependent = gradient_dependent;

    if (!gradient_dependent) {
        c.name = "gaussian";
        c.f = [g](double x, double y, Vec2) { return g.hessian_det(x, y); };
        return c;
    }

    // Gaussian-curvature form f = K (1 + |p|^2)^2 with K normalised by the exact gradient.
    c.name = "gaussian-curvature";
    auto curvature = [g](double x, double y) {
        const Vec2 p = g.gradient(x, y);
        const double w = 1.0 + p.x * p.x + p.y * p.y;
        return g.hessian_det(x, y) / (w * w);
    };
    c.f = [curvature](double x, double y, Vec2 p) {
        const double w = 1.0 + p.x * p.x + p.y * p.y;
        return curvature(x, y) * w * w;
    };
    c.grad_f_p = [curvature](double x, double y, Vec2 p) {
        const double w = 1.0 + p.x * p.x + p.y * p.y;
        const double s = 4.0 * curvature(x, y) * w;
        return Vec2{s * p.x, s * p.y};
    };
    return c;
}

ProblemCase oscillating_case(double sigma, Point mu, double eps_s, int l) {
    check_gaussian_parameters(sigma, mu);
    if (!std::isfinite(eps_s)) throw InvalidArgument("eps_s must be finite");
    if (l < 1) throw InvalidArgument("oscillation index l must be a positive integer");
    if (eps_s == 0.0) {
        ProblemCase c = gaussian_case(sigma, mu, false);
        c.name = "oscillating";
        return c;
    }

    const GaussianShape g{sigma, mu};
    const double a = static_cast<double>(l) * std::numbers::pi;

    ProblemCase c;
    c.name = "oscillating";
    c.gradient_dependent = false;
    c.exact = [g, a, eps_s](double x, double y) { return g.value(x, y) - eps_s * std::sin(a * x) * std::sin(a * y); };
    c.gamma = c.exact;
    c.exact_gradient = [g, a, eps_s](double x, double y) {
        const Vec2 p = g.gradient(x, y);
        return Vec2{p.x - eps_s * a * std::cos(a * x) * std::sin(a * y),
                    p.y - eps_s * a * std::sin(a * x) * std::cos(a * y)};
    };
    c.f = [g, a, eps_s](double x, double y, Vec2) {
        const auto [gxx, gyy, gxy] = g.hessian(x, y);
        const double ss = eps_s * a * a * std::sin(a * x) * std::sin(a * y);
        const double cc = eps_s * a * a * std::cos(a * x) * std::cos(a * y);
        const double uxx = gxx + ss;
        const double uyy = gyy + ss;
        const double uxy = gxy - cc;
        return uxx * uyy - uxy * uxy;
    };

    const RhsMinimum worst = sample_rhs_minimum(c, 200);
    if (worst.value < -1e-12) {
        std::ostringstream msg;
        msg << "oscillating case is not elliptic: f = " << worst.value << " at (" << worst.x << "," << worst.y
            << ") for eps_s = " << eps_s << ", l = " << l;
        throw InvalidArgument(msg.str());
    }
    return c;
}

ProblemCase quadratic_case() {
    ProblemCase c;
    c.name = "quadratic";
    c.exact = [](double x, double y) { return 0.5 * (x * x + y * y); };
    c.gamma = c.exact;
    c.exact_gradient = [](double x, double y) { return Vec2{x, y}; };
    c.f = [](double, double, Vec2) { return 1.0; };
    return c;
}

RhsMinimum sample_rhs_minimum(const ProblemCase& c, std::size_t m) {
    if (m < 2) throw InvalidArgument("sample grid needs at least 2 points per axis");
    RhsMinimum worst{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    const double h = 1.0 / static_cast<double>(m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            const double x = static_cast<double>(j) * h;
            const double y = static_cast<double>(k) * h;
            const Vec2 p = c.exact_gradient ? c.exact_gradient(x, y) : Vec2{};
            const double v = c.f(x, y, p);
            if (v < worst.value) worst = {v, x, y};
        }
    }
    return worst;
}

std::pair<Field, BoundaryData> initial_guess(const InitialGuess& guess, const ProblemCase& c, const Grid& grid) {
    if (!c.gamma) throw InvalidArgument("problem case has no boundary data");
    BoundaryData bc = sample_boundary(grid, c.gamma);

    if (guess.kind == GuessKind::custom) {
        if (!guess.custom) throw InvalidArgument("custom initial guess needs a function");
        return {sample_interior(grid, guess.custom), std::move(bc)};
    }
    if (!c.has_exact()) {
        throw InvalidArgument("initial guess '" + std::string(guess.kind == GuessKind::exact ? "exact" : "bump") +
                              "' requires a case with an exact solution");
    }

    double scale = 0.0;
    switch (guess.kind) {
        case GuessKind::convex_bump: scale = -guess.constant; break;
        case GuessKind::saddle_bump: scale = guess.constant; break;
        default: break;
    }
    const ScalarFn& exact = c.exact;
    Field u = sample_interior(grid, [&](double x, double y) { return exact(x, y) + scale * bump(x, y); });
    return {std::move(u), std::move(bc)};
}

}  // namespace ma
