#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace clam {

struct WeightEntry {
    std::size_t row;
    std::size_t col;
    double value;
};

// One cluster's constraint matrix, m x n_l, sparse by construction. Entries
// with |value| <= zero_epsilon are never stored. Immutable once built; both
// row-major and column-major adjacency are precomputed.
class SparseWeightMatrix {
public:
    SparseWeightMatrix(std::size_t cluster_id, std::size_t rows, std::size_t cols,
                       std::vector<WeightEntry> entries, double zero_epsilon);

    std::size_t cluster_id() const { return cluster_id_; }
    std::size_t rows() const { return rows_; }  // m_l
    std::size_t cols() const { return cols_; }  // n_l
    double zero_epsilon() const { return zero_epsilon_; }
    std::size_t entry_count() const { return entries_.size(); }

    // Entries sorted by (row, col).
    std::span<const WeightEntry> entries() const { return entries_; }
    std::span<const WeightEntry> row(std::size_t r) const;

    struct ColEntry {
        std::size_t row;
        double value;
    };
    std::span<const ColEntry> column(std::size_t c) const;

    std::size_t column_degree(std::size_t c) const { return column(c).size(); }
    std::vector<std::size_t> column_degrees() const;

    // Largest sum_j |W_ij| over rows; 0 for an empty matrix.
    double max_row_abs_sum() const { return max_row_abs_sum_; }

    // Dense copies of the rows, for rank checks.
    std::vector<std::vector<double>> dense_rows() const;

private:
    std::size_t cluster_id_;
    std::size_t rows_;
    std::size_t cols_;
    double zero_epsilon_;
    std::vector<WeightEntry> entries_;     // sorted by (row, col)
    std::vector<std::size_t> row_offset_;  // rows_+1
    std::vector<ColEntry> col_entries_;    // sorted by (col, row)
    std::vector<std::size_t> col_offset_;  // cols_+1
    double max_row_abs_sum_ = 0.0;
};

// Builds a matrix from dense rows, dropping entries with |v| <= drop below
// per-row cutoffs. Each row's cutoff is zero_epsilon_rel * max|row entry|;
// the stored zero_epsilon is the smallest cutoff applied.
SparseWeightMatrix sparsify_rows(std::size_t cluster_id,
                                 const std::vector<std::vector<double>>& rows, std::size_t cols,
                                 double zero_epsilon_rel);

}  // namespace clam
