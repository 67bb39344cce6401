#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace ma {

/// Sparse matrix in compressed row form; column indices are sorted within each row.
/// The operators assembled on a grid are square (n^2 x n^2); transfer operators are not.
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(std::size_t rows, std::size_t columns, std::vector<std::size_t> row_ptr,
                   std::vector<std::size_t> col_idx, std::vector<double> values, bool symmetric);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t columns() const noexcept { return columns_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool symmetric() const noexcept { return symmetric_; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry (r, c); zero outside the pattern.
    double at(std::size_t r, std::size_t c) const;

    std::size_t max_row_nnz() const noexcept;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    std::vector<double> diagonal() const;

    friend bool operator==(const SparseOperator&, const SparseOperator&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t columns_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

/// Row-by-row builder. Entries within a row may come in any order; duplicates are summed.
class SparseBuilder {
public:
    SparseBuilder(std::size_t rows, std::size_t columns);

    void add(std::size_t col, double value);
    /// Closes the current row.
    void end_row();

    SparseOperator finish(bool symmetric);

private:
    std::size_t rows_;
    std::size_t columns_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
    std::vector<std::pair<std::size_t, double>> pending_;
};

SparseOperator transpose(const SparseOperator& a);

/// Sparse product a * b.
SparseOperator multiply(const SparseOperator& a, const SparseOperator& b);

/// Matrix Market coordinate format with 1-based indices.
void write_matrix_market(std::ostream& os, const SparseOperator& a);

}  // namespace ma
