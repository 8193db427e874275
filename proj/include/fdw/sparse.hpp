#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace fdw {

struct SparseEntry {
    int col = 0;
    double value = 0.0;

    bool operator==(const SparseEntry&) const = default;
};

/// Read-only view of one sparse row with strictly increasing columns.
struct SparseRow {
    std::span<const SparseEntry> entries;

    std::size_t nnz() const { return entries.size(); }
    double squared_norm() const;
};

double dot(SparseRow a, SparseRow b);
double squared_distance(SparseRow a, SparseRow b);

/// Compressed sparse rows. Rows hold strictly increasing columns and no
/// explicit zeros.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t n_cols) : n_cols_(n_cols) {}

    std::size_t rows() const { return row_ptr_.size() - 1; }
    std::size_t cols() const { return n_cols_; }
    std::size_t nnz() const { return entries_.size(); }

    SparseRow row(std::size_t i) const {
        return {std::span<const SparseEntry>(entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i])};
    }

    /// Appends a row; entries are sorted, duplicate columns summed and zeros dropped.
    void append_row(std::vector<SparseEntry> entries);
    void append_row(SparseRow row);

    /// Rows in the given order.
    SparseMatrix select_rows(std::span<const std::size_t> indices) const;

    std::vector<double> dense_row(std::size_t i) const;
    static SparseMatrix from_dense(const std::vector<std::vector<double>>& rows, std::size_t n_cols);

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t n_cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<SparseEntry> entries_;
};

/// One line per row: `row_index col:weight ...`, weights to 6 significant digits.
void write_matrix(std::ostream& out, const SparseMatrix& m);

}  // namespace fdw
