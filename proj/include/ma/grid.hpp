#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ma/errors.hpp"

namespace ma {

/// Scalar function of a point in the closed unit square.
using ScalarFn = std::function<double(double, double)>;

/**
 * Uniform grid on the unit square with n interior nodes per axis.
 *
 * Nodes are x_j = j*dx, y_k = k*dx for j,k = 0..n+1 with dx = 1/(n+1).
 * Interior unknowns (1 <= j,k <= n) are stored lexicographically with j
 * running fastest: index(j,k) = (k-1)*n + (j-1).
 */
class Grid {
public:
    explicit Grid(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    std::size_t size() const noexcept { return n_ * n_; }

    double coord(std::size_t j) const noexcept { return static_cast<double>(j) * dx_; }
    std::pair<double, double> node(std::size_t j, std::size_t k) const noexcept {
        return {coord(j), coord(k)};
    }

    std::size_t index(std::size_t j, std::size_t k) const noexcept { return (k - 1) * n_ + (j - 1); }
    std::pair<std::size_t, std::size_t> node_of(std::size_t idx) const noexcept {
        return {idx % n_ + 1, idx / n_ + 1};
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
    double dx_;
};

Grid make_grid(std::size_t n);

/// Interior nodal values in lexicographic order.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid, double value = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t j, std::size_t k) { return values_[(k - 1) * n_ + (j - 1)]; }
    double at(std::size_t j, std::size_t k) const { return values_[(k - 1) * n_ + (j - 1)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vec() const noexcept { return values_; }

    bool all_finite() const noexcept;
    double norm2() const noexcept;
    double norm_inf() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/**
 * Values on the 4(n+1) boundary nodes of the (n+2)x(n+2) node layout.
 *
 * Storage: bottom row (k=0, j=0..n+1), top row (k=n+1, j=0..n+1), then the
 * left (j=0) and right (j=n+1) columns for k=1..n. Corners live in the rows.
 */
class BoundaryData {
public:
    BoundaryData() = default;
    explicit BoundaryData(const Grid& grid, double value = 0.0);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }

    static bool on_boundary(std::size_t n, std::size_t j, std::size_t k) noexcept {
        return j == 0 || k == 0 || j == n + 1 || k == n + 1;
    }

    double& at(std::size_t j, std::size_t k) { return values_[slot(j, k)]; }
    double at(std::size_t j, std::size_t k) const { return values_[slot(j, k)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool all_finite() const noexcept;
    double norm_inf() const noexcept;

    friend bool operator==(const BoundaryData&, const BoundaryData&) = default;

private:
    std::size_t slot(std::size_t j, std::size_t k) const;

    std::size_t n_ = 0;
    std::vector<double> values_;
};

BoundaryData operator-(const BoundaryData& a, const BoundaryData& b);

/// Samples g at every interior node; throws NonFiniteError naming the node.
Field sample_interior(const Grid& grid, const ScalarFn& g);

/// Samples g at every boundary node; throws NonFiniteError naming the node.
BoundaryData sample_boundary(const Grid& grid, const ScalarFn& g);

/// Full (n+2)^2 node array, row-major with j fastest, combining interior and boundary values.
std::vector<double> padded(const Field& u, const BoundaryData& bc);

/// Writes `x,y,u` rows for every node (boundary included), k outer, j inner,
/// with 17 significant digits.
void write_field_csv(std::ostream& os, const Grid& grid, const Field& u, const BoundaryData& bc);

}  // namespace ma
