#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "ma/grid.hpp"

namespace ma {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Right-hand side f(x, y, p) of det(D^2 u) = f(x, y, grad u), with Dirichlet data and an optional exact solution.
struct ProblemCase {
    using Rhs = std::function<double(double x, double y, Vec2 p)>;
    using RhsGradient = std::function<Vec2(double x, double y, Vec2 p)>;
    using VectorFn = std::function<Vec2(double x, double y)>;

    std::string name;
    Rhs f;
    /// Gradient of f with respect to p. Empty when f does not depend on p.
    RhsGradient grad_f_p;
    ScalarFn gamma;
    ScalarFn exact;
    VectorFn exact_gradient;
    bool gradient_dependent = false;

    bool has_exact() const noexcept { return static_cast<bool>(exact); }
    Vec2 rhs_gradient(double x, double y, Vec2 p) const { return grad_f_p ? grad_f_p(x, y, p) : Vec2{}; }
};

struct Point {
    double x = 0.5;
    double y = 0.5;
};

/**
 * Gaussian test problem with exact solution u = -exp(-|x - mu|^2 / (2 sigma^2)).
 *
 * Without gradient dependence f is det(D^2 u) = (1 - |x-mu|^2/sigma^2) u^2 / sigma^4.
 * With gradient dependence f(x, p) = K(x) (1 + |p|^2)^2 where K is chosen so that
 * the Gaussian is still the exact solution.
 *
 * Throws InvalidArgument unless |x - mu| <= sigma on the whole closed square.
 */
ProblemCase gaussian_case(double sigma, Point mu, bool gradient_dependent);

/// Gaussian perturbed by -eps_s sin(l pi x) sin(l pi y); f = det(D^2 u_ex) in closed form.
/// Rejects parameters for which f < -1e-12 anywhere on a 200x200 sample grid.
ProblemCase oscillating_case(double sigma, Point mu, double eps_s, int l);

/// u = (x^2 + y^2)/2 with f = 1. Central differences are exact for it.
ProblemCase quadratic_case();

/// Samples f on an m x m grid of the closed square and returns the minimum and where it occurs.
struct RhsMinimum {
    double value;
    double x;
    double y;
};
RhsMinimum sample_rhs_minimum(const ProblemCase& c, std::size_t m = 200);

enum class GuessKind { convex_bump, saddle_bump, exact, custom };

struct InitialGuess {
    GuessKind kind = GuessKind::convex_bump;
    double constant = 30.0;
    /// Used when kind == custom; the boundary is still taken from gamma.
    ScalarFn custom;

    static InitialGuess convex(double c1) { return {GuessKind::convex_bump, c1, {}}; }
    static InitialGuess saddle(double c2) { return {GuessKind::saddle_bump, c2, {}}; }
    static InitialGuess exact_solution() { return {GuessKind::exact, 0.0, {}}; }
};

/// Interior values and boundary data (equal to sampled gamma) of the starting iterate.
std::pair<Field, BoundaryData> initial_guess(const InitialGuess& guess, const ProblemCase& c, const Grid& grid);

/// x(1-x)y(1-y), vanishing on the boundary.
inline double bump(double x, double y) { return x * (1.0 - x) * y * (1.0 - y); }

}  // namespace ma
