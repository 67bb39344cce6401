#include "ma/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace ma {

Grid::Grid(std::size_t n) : n_(n), dx_(0.0) {
    if (n == 0) {
        throw InvalidArgument("grid needs at least one interior node per axis (n >= 1)");
    }
    dx_ = 1.0 / static_cast<double>(n + 1);
}

Grid make_grid(std::size_t n) { return Grid(n); }

// ---------------------------------------------------------------- Field

Field::Field(const Grid& grid, double value) : n_(grid.n()), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : n_(grid.n()), values_(std::move(values)) {
    if (values_.size() != grid.size()) {
        throw InvalidArgument("field length " + std::to_string(values_.size()) + " does not match grid size " +
                              std::to_string(grid.size()));
    }
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::norm2() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double Field::norm_inf() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {
void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw InvalidArgument("field dimension mismatch");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
    check_same(size(), other.size());
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_same(size(), other.size());
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

// ---------------------------------------------------------- BoundaryData

BoundaryData::BoundaryData(const Grid& grid, double value) : n_(grid.n()), values_(4 * (grid.n() + 1), value) {}

std::size_t BoundaryData::slot(std::size_t j, std::size_t k) const {
    const std::size_t row = n_ + 2;
    if (k == 0) return j;
    if (k == n_ + 1) return row + j;
    if (j == 0) return 2 * row + (k - 1);
    if (j == n_ + 1) return 2 * row + n_ + (k - 1);
    throw InvalidArgument("node (" + std::to_string(j) + "," + std::to_string(k) + ") is not a boundary node");
}

bool BoundaryData::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double BoundaryData::norm_inf() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

BoundaryData operator-(const BoundaryData& a, const BoundaryData& b) {
    check_same(a.size(), b.size());
    BoundaryData out = a;
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
    return out;
}

// -------------------------------------------------------------- sampling

Field sample_interior(const Grid& grid, const ScalarFn& g) {
    Field out(grid);
    const std::size_t n = grid.n();
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 1; j <= n; ++j) {
            const double v = g(grid.coord(j), grid.coord(k));
            if (!std::isfinite(v)) throw NonFiniteError("non-finite interior sample", j, k);
            out.at(j, k) = v;
        }
    }
    return out;
}

BoundaryData sample_boundary(const Grid& grid, const ScalarFn& g) {
    BoundaryData out(grid);
    const std::size_t n = grid.n();
    auto put = [&](std::size_t j, std::size_t k) {
        const double v = g(grid.coord(j), grid.coord(k));
        if (!std::isfinite(v)) throw NonFiniteError("non-finite boundary sample", j, k);
        out.at(j, k) = v;
    };
    for (std::size_t j = 0; j <= n + 1; ++j) {
        put(j, 0);
        put(j, n + 1);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        put(0, k);
        put(n + 1, k);
    }
    return out;
}

std::vector<double> padded(const Field& u, const BoundaryData& bc) {
    const std::size_t n = u.n();
    if (bc.n() != n) throw InvalidArgument("boundary data does not match field dimension");
    const std::size_t m = n + 2;
    std::vector<double> full(m * m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            full[k * m + j] = BoundaryData::on_boundary(n, j, k) ? bc.at(j, k) : u.at(j, k);
        }
    }
    return full;
}

void write_field_csv(std::ostream& os, const Grid& grid, const Field& u, const BoundaryData& bc) {
    const auto full = padded(u, bc);
    const std::size_t m = grid.n() + 2;
    const auto old_flags = os.flags();
    const auto old_prec = os.precision();
    os << "x,y,u\n" << std::setprecision(17);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            os << grid.coord(j) << ',' << grid.coord(k) << ',' << full[k * m + j] << '\n';
        }
    }
    os.flags(old_flags);
    os.precision(old_prec);
}

}  // namespace ma
