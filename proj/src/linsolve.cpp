#include "ma/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ma/errors.hpp"

namespace ma {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    std::copy(r.begin(), r.end(), z.begin());
}

// ------------------------------------------------------------------ ILU(0)

Ilu0Preconditioner::Ilu0Preconditioner(const SparseOperator& a) {
    if (a.rows() != a.columns()) throw InvalidArgument("ILU(0) needs a square matrix");
    const std::size_t n = a.rows();
    auto rp = a.row_ptr();
    auto ci = a.col_idx();
    std::vector<double> v(a.values().begin(), a.values().end());

    diag_pos_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto first = ci.begin() + static_cast<std::ptrdiff_t>(rp[i]);
        const auto last = ci.begin() + static_cast<std::ptrdiff_t>(rp[i + 1]);
        const auto it = std::lower_bound(first, last, i);
        if (it == last || *it != i) {
            throw SolverError(SolverError::Kind::zero_pivot, "ILU(0): row " + std::to_string(i) + " has no diagonal");
        }
        diag_pos_[i] = static_cast<std::size_t>(it - ci.begin());
    }

    // IKJ variant restricted to the pattern.
    std::vector<std::ptrdiff_t> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) pos[ci[p]] = static_cast<std::ptrdiff_t>(p);
        for (std::size_t p = rp[i]; p < rp[i + 1] && ci[p] < i; ++p) {
            const std::size_t k = ci[p];
            const double pivot = v[diag_pos_[k]];
            v[p] /= pivot;
            for (std::size_t q = diag_pos_[k] + 1; q < rp[k + 1]; ++q) {
                const std::ptrdiff_t target = pos[ci[q]];
                if (target >= 0) v[static_cast<std::size_t>(target)] -= v[p] * v[q];
            }
        }
        if (v[diag_pos_[i]] == 0.0 || !std::isfinite(v[diag_pos_[i]])) {
            throw SolverError(SolverError::Kind::zero_pivot, "ILU(0): zero pivot in row " + std::to_string(i));
        }
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) pos[ci[p]] = -1;
    }

    lu_ = SparseOperator(n, n, std::vector<std::size_t>(rp.begin(), rp.end()),
                         std::vector<std::size_t>(ci.begin(), ci.end()), std::move(v), false);
}

void Ilu0Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
    const std::size_t n = lu_.rows();
    auto rp = lu_.row_ptr();
    auto ci = lu_.col_idx();
    auto v = lu_.values();
    for (std::size_t i = 0; i < n; ++i) {
        double s = r[i];
        for (std::size_t p = rp[i]; p < diag_pos_[i]; ++p) s -= v[p] * z[ci[p]];
        z[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = z[i];
        for (std::size_t p = diag_pos_[i] + 1; p < rp[i + 1]; ++p) s -= v[p] * z[ci[p]];
        z[i] = s / v[diag_pos_[i]];
    }
}

std::unique_ptr<Ilu0Preconditioner> ilu0(const SparseOperator& a) { return std::make_unique<Ilu0Preconditioner>(a); }

// ---------------------------------------------------------------------- CG

CgResult cg(const SparseOperator& a, std::span<const double> b, const CgOptions& options, const Preconditioner& p) {
    const std::size_t n = a.rows();
    if (a.columns() != n || b.size() != n) throw InvalidArgument("CG dimension mismatch");

    CgResult out{std::vector<double>(n, 0.0), {}};
    const double bnorm = norm2(b);
    if (options.record_history) out.stats.residual_history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
    if (bnorm == 0.0) {
        out.stats.converged = true;
        return out;
    }

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), d(n), ad(n);
    p.apply(r, z);
    d = z;
    double rz = dot(r, z);
    double rel = 1.0;

    for (std::size_t it = 1; it <= options.max_iters; ++it) {
        if (!(rz > 0.0)) {
            throw SolverError(SolverError::Kind::breakdown, "CG breakdown: preconditioned residual r.z <= 0");
        }
        a.multiply(d, ad);
        const double curvature = dot(d, ad);
        if (!(curvature > 0.0)) {
            throw SolverError(SolverError::Kind::breakdown, "CG breakdown: p.Ap <= 0 (matrix not SPD)");
        }
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        rel = norm2(r) / bnorm;
        out.stats.iterations = it;
        if (options.record_history) out.stats.residual_history.push_back(rel);
        if (options.observer) options.observer(it, out.x, r);
        if (rel <= options.tol) break;

        p.apply(r, z);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
    }
    out.stats.relative_residual = rel;
    out.stats.converged = rel <= options.tol;
    return out;
}

// ------------------------------------------------------------------ direct

struct SparseDirectSolver::Impl {
    using Matrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    Matrix matrix;
    bool spd = false;
    Eigen::SimplicialLDLT<Matrix> ldlt;
    Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>> lu;
};

namespace {

Eigen::SparseMatrix<double, Eigen::ColMajor, int> to_eigen(const SparseOperator& a) {
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(a.nnz());
    auto rp = a.row_ptr();
    auto ci = a.col_idx();
    auto v = a.values();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
            triplets.emplace_back(static_cast<int>(r), static_cast<int>(ci[p]), v[p]);
        }
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor, int> m(static_cast<int>(a.rows()), static_cast<int>(a.columns()));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace

SparseDirectSolver::SparseDirectSolver(const SparseOperator& a) : impl_(std::make_unique<Impl>()) {
    if (a.rows() != a.columns()) throw InvalidArgument("direct solve needs a square matrix");
    impl_->matrix = to_eigen(a);
    impl_->spd = a.symmetric();
    if (impl_->spd) {
        impl_->ldlt.compute(impl_->matrix);
        if (impl_->ldlt.info() != Eigen::Success) {
            throw SolverError(SolverError::Kind::singular, "sparse LDL^T factorisation failed");
        }
    } else {
        impl_->lu.analyzePattern(impl_->matrix);
        impl_->lu.factorize(impl_->matrix);
        if (impl_->lu.info() != Eigen::Success) {
            throw SolverError(SolverError::Kind::singular, "sparse LU factorisation failed: " + impl_->lu.lastErrorMessage());
        }
    }
}

SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

std::vector<double> SparseDirectSolver::solve(std::span<const double> b) const {
    const auto n = static_cast<Eigen::Index>(b.size());
    if (n != impl_->matrix.rows()) throw InvalidArgument("direct solve dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    Eigen::VectorXd x = impl_->spd ? Eigen::VectorXd(impl_->ldlt.solve(rhs)) : Eigen::VectorXd(impl_->lu.solve(rhs));

    const double bnorm = rhs.norm();
    const double rnorm = (impl_->matrix * x - rhs).norm();
    if (!x.allFinite() || rnorm > 1e-10 * bnorm) {
        throw SolverError(SolverError::Kind::singular,
                          "direct solve inaccurate (relative residual " + std::to_string(bnorm > 0 ? rnorm / bnorm : rnorm) +
                              "); matrix is singular or nearly so");
    }
    return {x.data(), x.data() + n};
}

std::vector<double> direct_solve(const SparseOperator& a, std::span<const double> b) {
    return SparseDirectSolver(a).solve(b);
}

std::vector<double> solve_nonsymmetric(const SparseOperator& a, std::span<const double> b) {
    const SparseOperator general(a.rows(), a.columns(), std::vector<std::size_t>(a.row_ptr().begin(), a.row_ptr().end()),
                                 std::vector<std::size_t>(a.col_idx().begin(), a.col_idx().end()),
                                 std::vector<double>(a.values().begin(), a.values().end()), false);
    return SparseDirectSolver(general).solve(b);
}

}  // namespace ma
