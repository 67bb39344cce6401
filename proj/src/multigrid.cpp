#include "ma/multigrid.hpp"

#include <Eigen/Dense>

#include "ma/errors.hpp"
#include "ma/fdops.hpp"

namespace ma {

struct MultigridPreconditioner::Level {
    std::size_t n = 0;
    SparseOperator a;
    std::vector<double> inv_diag;
    /// Prolongation from the next coarser level; empty on the coarsest level.
    SparseOperator p;
    SparseOperator r;
};

struct MultigridPreconditioner::Coarsest {
    Eigen::LLT<Eigen::MatrixXd> llt;
};

namespace {

/// 1-D linear interpolation; coarse node c (1-based) sits at fine node 2c.
SparseOperator prolongation_1d(std::size_t n) {
    const std::size_t nc = n / 2;
    SparseBuilder b(n, nc);
    for (std::size_t i = 1; i <= n; ++i) {
        if (i % 2 == 0) {
            b.add(i / 2 - 1, 1.0);
        } else {
            const std::size_t left = (i - 1) / 2;
            const std::size_t right = (i + 1) / 2;
            if (left >= 1) b.add(left - 1, 0.5);
            if (right <= nc) b.add(right - 1, 0.5);
        }
        b.end_row();
    }
    return b.finish(false);
}

SparseOperator scaled(const SparseOperator& a, double s, bool symmetric) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x *= s;
    return SparseOperator(a.rows(), a.columns(), std::vector<std::size_t>(a.row_ptr().begin(), a.row_ptr().end()),
                          std::vector<std::size_t>(a.col_idx().begin(), a.col_idx().end()), std::move(v), symmetric);
}

std::vector<double> inverse_diagonal(const SparseOperator& a) {
    auto d = a.diagonal();
    for (double& x : d) {
        if (x == 0.0) throw SolverError(SolverError::Kind::zero_pivot, "multigrid: zero diagonal in level operator");
        x = 1.0 / x;
    }
    return d;
}

}  // namespace

SparseOperator bilinear_prolongation(std::size_t n_fine) {
    if (n_fine < 2) throw InvalidArgument("prolongation needs at least two fine nodes per axis");
    const SparseOperator p1 = prolongation_1d(n_fine);
    const std::size_t nc = n_fine / 2;
    SparseBuilder b(n_fine * n_fine, nc * nc);
    auto rp = p1.row_ptr();
    auto ci = p1.col_idx();
    auto v = p1.values();
    for (std::size_t kf = 0; kf < n_fine; ++kf) {
        for (std::size_t jf = 0; jf < n_fine; ++jf) {
            for (std::size_t pk = rp[kf]; pk < rp[kf + 1]; ++pk) {
                for (std::size_t pj = rp[jf]; pj < rp[jf + 1]; ++pj) {
                    b.add(ci[pk] * nc + ci[pj], v[pk] * v[pj]);
                }
            }
            b.end_row();
        }
    }
    return b.finish(false);
}

MultigridPreconditioner::MultigridPreconditioner(const Grid& grid, double omega) : omega_(omega) {
    Level fine;
    fine.n = grid.n();
    fine.a = assemble_laplacian(grid);
    levels_.push_back(std::move(fine));

    while (levels_.back().n > 3) {
        Level& cur = levels_.back();
        cur.inv_diag = inverse_diagonal(cur.a);
        cur.p = bilinear_prolongation(cur.n);
        cur.r = scaled(transpose(cur.p), 0.25, false);
        Level coarse;
        coarse.n = cur.n / 2;
        coarse.a = scaled(multiply(cur.r, multiply(cur.a, cur.p)), 1.0, true);
        levels_.push_back(std::move(coarse));
    }

    const SparseOperator& ac = levels_.back().a;
    const auto m = static_cast<Eigen::Index>(ac.rows());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) dense(i, j) = ac.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    // Galerkin products are symmetric only up to rounding.
    dense = 0.5 * (dense + dense.transpose()).eval();
    coarsest_ = std::make_unique<Coarsest>();
    coarsest_->llt.compute(dense);
    if (coarsest_->llt.info() != Eigen::Success) {
        throw SolverError(SolverError::Kind::singular, "multigrid: coarsest operator is not positive definite");
    }
}

MultigridPreconditioner::~MultigridPreconditioner() = default;

std::size_t MultigridPreconditioner::levels() const noexcept { return levels_.size(); }

std::vector<std::size_t> MultigridPreconditioner::level_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& l : levels_) out.push_back(l.n);
    return out;
}

void MultigridPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    if (r.size() != levels_.front().a.rows() || z.size() != r.size()) {
        throw InvalidArgument("multigrid apply dimension mismatch");
    }
    vcycle(0, r, z);
}

void MultigridPreconditioner::vcycle(std::size_t level, std::span<const double> b, std::span<double> x) const {
    const Level& l = levels_[level];
    const std::size_t size = b.size();

    if (level + 1 == levels_.size()) {
        Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(size));
        const Eigen::VectorXd sol = coarsest_->llt.solve(rhs);
        std::copy(sol.data(), sol.data() + size, x.begin());
        return;
    }

    // Pre-smooth from x = 0.
    for (std::size_t i = 0; i < size; ++i) x[i] = omega_ * l.inv_diag[i] * b[i];

    std::vector<double> res(size);
    l.a.multiply(x, res);
    for (std::size_t i = 0; i < size; ++i) res[i] = b[i] - res[i];

    const std::size_t coarse_size = l.r.rows();
    std::vector<double> bc(coarse_size), xc(coarse_size);
    l.r.multiply(res, bc);
    vcycle(level + 1, bc, xc);

    std::vector<double> corr(size);
    l.p.multiply(xc, corr);
    for (std::size_t i = 0; i < size; ++i) x[i] += corr[i];

    // Post-smooth.
    l.a.multiply(x, res);
    for (std::size_t i = 0; i < size; ++i) x[i] += omega_ * l.inv_diag[i] * (b[i] - res[i]);
}

std::unique_ptr<MultigridPreconditioner> multigrid_preconditioner(const Grid& grid) {
    return std::make_unique<MultigridPreconditioner>(grid);
}

}  // namespace ma
