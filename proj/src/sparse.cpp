#include "ma/sparse.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "ma/errors.hpp"

namespace ma {

SparseOperator::SparseOperator(std::size_t rows, std::size_t columns, std::vector<std::size_t> row_ptr,
                               std::vector<std::size_t> col_idx, std::vector<double> values, bool symmetric)
    : rows_(rows),
      columns_(columns),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)),
      symmetric_(symmetric) {
    if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() || row_ptr_.back() != values_.size()) {
        throw InvalidArgument("inconsistent compressed-row arrays");
    }
}

double SparseOperator::at(std::size_t r, std::size_t c) const {
    const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::size_t SparseOperator::max_row_nnz() const noexcept {
    std::size_t m = 0;
    for (std::size_t r = 0; r < rows_; ++r) m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
    return m;
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != columns_ || y.size() != rows_) throw InvalidArgument("matrix-vector dimension mismatch");
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += values_[p] * x[col_idx_[p]];
        y[r] = s;
    }
}

std::vector<double> SparseOperator::multiply(std::span<const double> x) const {
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

std::vector<double> SparseOperator::diagonal() const {
    std::vector<double> d(std::min(rows_, columns_), 0.0);
    for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
    return d;
}

// ---------------------------------------------------------------- builder

SparseBuilder::SparseBuilder(std::size_t rows, std::size_t columns) : rows_(rows), columns_(columns) {
    row_ptr_.reserve(rows + 1);
}

void SparseBuilder::add(std::size_t col, double value) {
    if (col >= columns_) throw InvalidArgument("column index out of range");
    pending_.emplace_back(col, value);
}

void SparseBuilder::end_row() {
    std::sort(pending_.begin(), pending_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (!col_idx_.empty() && row_ptr_.back() < col_idx_.size() && col_idx_.back() == pending_[i].first) {
            values_.back() += pending_[i].second;
        } else {
            col_idx_.push_back(pending_[i].first);
            values_.push_back(pending_[i].second);
        }
    }
    pending_.clear();
    row_ptr_.push_back(col_idx_.size());
}

SparseOperator SparseBuilder::finish(bool symmetric) {
    if (!pending_.empty()) end_row();
    if (row_ptr_.size() != rows_ + 1) throw InvalidArgument("builder finished with wrong number of rows");
    return SparseOperator(rows_, columns_, std::move(row_ptr_), std::move(col_idx_), std::move(values_), symmetric);
}

// --------------------------------------------------------------- algebra

SparseOperator transpose(const SparseOperator& a) {
    std::vector<std::size_t> counts(a.columns() + 1, 0);
    for (std::size_t c : a.col_idx()) ++counts[c + 1];
    for (std::size_t c = 0; c < a.columns(); ++c) counts[c + 1] += counts[c];
    std::vector<std::size_t> row_ptr = counts;
    std::vector<std::size_t> cols(a.nnz());
    std::vector<double> vals(a.nnz());
    auto rp = a.row_ptr();
    auto ci = a.col_idx();
    auto av = a.values();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
            const std::size_t dst = counts[ci[p]]++;
            cols[dst] = r;
            vals[dst] = av[p];
        }
    }
    return SparseOperator(a.columns(), a.rows(), std::move(row_ptr), std::move(cols), std::move(vals), a.symmetric());
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b) {
    if (a.columns() != b.rows()) throw InvalidArgument("sparse product dimension mismatch");
    SparseBuilder out(a.rows(), b.columns());
    std::vector<double> acc(b.columns(), 0.0);
    std::vector<char> used(b.columns(), 0);
    std::vector<std::size_t> touched;
    auto arp = a.row_ptr();
    auto aci = a.col_idx();
    auto av = a.values();
    auto brp = b.row_ptr();
    auto bci = b.col_idx();
    auto bv = b.values();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t p = arp[r]; p < arp[r + 1]; ++p) {
            const std::size_t mid = aci[p];
            for (std::size_t q = brp[mid]; q < brp[mid + 1]; ++q) {
                const std::size_t c = bci[q];
                if (!used[c]) {
                    used[c] = 1;
                    touched.push_back(c);
                }
                acc[c] += av[p] * bv[q];
            }
        }
        for (std::size_t c : touched) {
            out.add(c, acc[c]);
            acc[c] = 0.0;
            used[c] = 0;
        }
        touched.clear();
        out.end_row();
    }
    return out.finish(false);
}

void write_matrix_market(std::ostream& os, const SparseOperator& a) {
    const auto old_prec = os.precision();
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.rows() << ' ' << a.columns() << ' ' << a.nnz() << '\n';
    os << std::setprecision(17);
    auto rp = a.row_ptr();
    auto ci = a.col_idx();
    auto av = a.values();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) os << r + 1 << ' ' << ci[p] + 1 << ' ' << av[p] << '\n';
    }
    os.precision(old_prec);
}

}  // namespace ma
