#include "ma/green.hpp"

#include <cmath>
#include <numbers>

#include "ma/errors.hpp"

namespace ma {

double greens_value(double x, double y, double x0, double y0, std::size_t truncation) {
    constexpr double pi = std::numbers::pi;
    double sum = 0.0;
    for (std::size_t m = 1; m <= truncation; ++m) {
        const double sx = std::sin(static_cast<double>(m) * pi * x) * std::sin(static_cast<double>(m) * pi * x0);
        for (std::size_t k = 1; k <= truncation; ++k) {
            const double sy = std::sin(static_cast<double>(k) * pi * y) * std::sin(static_cast<double>(k) * pi * y0);
            sum += sx * sy / static_cast<double>(m * m + k * k);
        }
    }
    return 4.0 * sum / (pi * pi);
}

GreensMatrix::GreensMatrix(std::size_t n, std::size_t truncation, std::vector<double> entries)
    : n_(n), truncation_(truncation), entries_(std::move(entries)) {
    if (entries_.size() != dim() * dim()) throw InvalidArgument("Green's matrix storage has the wrong size");
}

void GreensMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t d = dim();
    if (x.size() != d || y.size() != d) throw InvalidArgument("Green's matrix-vector dimension mismatch");
    for (std::size_t a = 0; a < d; ++a) {
        const double* row = entries_.data() + a * d;
        double s = 0.0;
        for (std::size_t b = 0; b < d; ++b) s += row[b] * x[b];
        y[a] = s;
    }
}

GreensMatrix assemble_greens_matrix(const Grid& grid, std::size_t truncation) {
    const std::size_t n = grid.n();
    if (n > kGreensMaxN) {
        throw CapacityError("Green's function backend supports n <= " + std::to_string(kGreensMaxN) + " (requested n = " +
                            std::to_string(n) + "); the dense " + std::to_string(n * n) + "^2 matrix is too large");
    }
    if (truncation == 0) throw InvalidArgument("Green's function truncation order must be >= 1");

    constexpr double pi = std::numbers::pi;
    const std::size_t mt = truncation;

    // sines[m][j] = sin(m pi x_j), 1-based m and j.
    std::vector<double> sines((mt + 1) * (n + 1), 0.0);
    for (std::size_t m = 1; m <= mt; ++m) {
        for (std::size_t j = 1; j <= n; ++j) {
            sines[m * (n + 1) + j] = std::sin(static_cast<double>(m) * pi * grid.coord(j));
        }
    }
    auto s = [&](std::size_t m, std::size_t j) { return sines[m * (n + 1) + j]; };

    // The double series factorises: sum_m [s_m(j) s_m(j')] * sum_k [s_k(i) s_k(i')] / (m^2 + k^2).
    // Both brackets are symmetric in their node pair, which keeps the matrix exactly symmetric.
    std::vector<double> inner(n * n);
    std::vector<double> outer(n * n);
    const std::size_t d = n * n;
    std::vector<double> entries(d * d, 0.0);
    const double scale = 4.0 * grid.dx() * grid.dx() / (pi * pi);

    for (std::size_t m = 1; m <= mt; ++m) {
        for (std::size_t a = 1; a <= n; ++a) {
            for (std::size_t b = 1; b <= n; ++b) {
                double acc = 0.0;
                for (std::size_t k = 1; k <= mt; ++k) acc += s(k, a) * s(k, b) / static_cast<double>(m * m + k * k);
                inner[(a - 1) * n + (b - 1)] = acc;
                outer[(a - 1) * n + (b - 1)] = s(m, a) * s(m, b);
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t kp = 0; kp < n; ++kp) {
                const double t = inner[k * n + kp];
                for (std::size_t j = 0; j < n; ++j) {
                    double* row = entries.data() + (k * n + j) * d + kp * n;
                    const double* o = outer.data() + j * n;
                    for (std::size_t jp = 0; jp < n; ++jp) row[jp] += o[jp] * t;
                }
            }
        }
    }
    for (double& e : entries) e *= scale;
    return GreensMatrix(n, truncation, std::move(entries));
}

Field apply_greens(const GreensMatrix& g, const Field& rho, double lambda) {
    if (lambda == 0.0) throw InvalidArgument("lumped constant Lambda must be nonzero");
    if (rho.size() != g.dim()) throw InvalidArgument("residual does not match Green's matrix dimension");
    Field v = rho;
    g.multiply(rho.values(), v.values());
    v *= 1.0 / lambda;
    return v;
}

}  // namespace ma
