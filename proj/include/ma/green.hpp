#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ma/grid.hpp"

namespace ma {

/// Largest grid accepted by assemble_greens_matrix; the dense n^2 x n^2 matrix is 8 n^4 bytes.
inline constexpr std::size_t kGreensMaxN = 100;

/// Default truncation order of the sine series.
inline constexpr std::size_t kGreensDefaultM = 50;

/// Truncated sine-series Green's function of -Delta on the unit square with zero Dirichlet data:
/// 4 sum_{m,n=1..M} sin(m pi x) sin(n pi y) sin(m pi x0) sin(n pi y0) / (pi^2 (m^2 + n^2)).
double greens_value(double x, double y, double x0, double y0, std::size_t truncation);

/// Dense quadrature matrix with entries dx^2 G_M(x_a; x_b) over interior node pairs.
class GreensMatrix {
public:
    GreensMatrix(std::size_t n, std::size_t truncation, std::vector<double> entries);

    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return n_ * n_; }
    std::size_t truncation() const noexcept { return truncation_; }

    double operator()(std::size_t a, std::size_t b) const { return entries_[a * dim() + b]; }

    /// y = G x
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_;
    std::size_t truncation_;
    std::vector<double> entries_;
};

/// Throws CapacityError for n > kGreensMaxN.
GreensMatrix assemble_greens_matrix(const Grid& grid, std::size_t truncation = kGreensDefaultM);

/**
 * Update of the fixed-point step for zero boundary data: v = (1/Lambda) G rho.
 *
 * The kernel is the (positive) Green's function of -Delta, so this solves
 * -Delta v = rho / Lambda, i.e. Delta v = -rho / Lambda. Throws InvalidArgument for Lambda = 0.
 */
Field apply_greens(const GreensMatrix& g, const Field& rho, double lambda);

}  // namespace ma
