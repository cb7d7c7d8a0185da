#include "clam/sparse_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace clam {

SparseWeightMatrix::SparseWeightMatrix(std::size_t cluster_id, std::size_t rows, std::size_t cols,
                                       std::vector<WeightEntry> entries, double zero_epsilon)
    : cluster_id_(cluster_id),
      rows_(rows),
      cols_(cols),
      zero_epsilon_(zero_epsilon),
      entries_(std::move(entries)) {
    if (cols_ == 0) throw std::invalid_argument("SparseWeightMatrix: zero columns");
    if (zero_epsilon_ < 0.0) throw std::invalid_argument("SparseWeightMatrix: negative epsilon");

    std::sort(entries_.begin(), entries_.end(), [](const WeightEntry& a, const WeightEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.row >= rows_ || e.col >= cols_)
            throw std::invalid_argument("SparseWeightMatrix: entry out of bounds");
        if (!(std::abs(e.value) > zero_epsilon_))
            throw std::invalid_argument("SparseWeightMatrix: entry magnitude at or below epsilon");
        if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col)
            throw std::invalid_argument("SparseWeightMatrix: duplicate entry at row " +
                                        std::to_string(e.row));
    }

    row_offset_.assign(rows_ + 1, 0);
    for (const auto& e : entries_) row_offset_[e.row + 1]++;
    for (std::size_t r = 0; r < rows_; ++r) row_offset_[r + 1] += row_offset_[r];

    col_entries_.reserve(entries_.size());
    std::vector<WeightEntry> by_col = entries_;
    std::sort(by_col.begin(), by_col.end(), [](const WeightEntry& a, const WeightEntry& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    col_offset_.assign(cols_ + 1, 0);
    for (const auto& e : by_col) {
        col_entries_.push_back({e.row, e.value});
        col_offset_[e.col + 1]++;
    }
    for (std::size_t c = 0; c < cols_; ++c) col_offset_[c + 1] += col_offset_[c];

    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (const auto& e : row(r)) s += std::abs(e.value);
        max_row_abs_sum_ = std::max(max_row_abs_sum_, s);
    }
}

std::span<const WeightEntry> SparseWeightMatrix::row(std::size_t r) const {
    if (r >= rows_) throw std::out_of_range("SparseWeightMatrix: row out of range");
    return {entries_.data() + row_offset_[r], row_offset_[r + 1] - row_offset_[r]};
}

std::span<const SparseWeightMatrix::ColEntry> SparseWeightMatrix::column(std::size_t c) const {
    if (c >= cols_) throw std::out_of_range("SparseWeightMatrix: column out of range");
    return {col_entries_.data() + col_offset_[c], col_offset_[c + 1] - col_offset_[c]};
}

std::vector<std::size_t> SparseWeightMatrix::column_degrees() const {
    std::vector<std::size_t> deg(cols_);
    for (std::size_t c = 0; c < cols_; ++c) deg[c] = col_offset_[c + 1] - col_offset_[c];
    return deg;
}

std::vector<std::vector<double>> SparseWeightMatrix::dense_rows() const {
    std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_, 0.0));
    for (const auto& e : entries_) out[e.row][e.col] = e.value;
    return out;
}

SparseWeightMatrix sparsify_rows(std::size_t cluster_id,
                                 const std::vector<std::vector<double>>& rows, std::size_t cols,
                                 double zero_epsilon_rel) {
    std::vector<WeightEntry> entries;
    double min_cutoff = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("sparsify_rows: row length mismatch");
        double max_abs = 0.0;
        for (double v : rows[r]) max_abs = std::max(max_abs, std::abs(v));
        const double cutoff = zero_epsilon_rel * max_abs;
        min_cutoff = std::min(min_cutoff, cutoff);
        for (std::size_t c = 0; c < cols; ++c) {
            if (std::abs(rows[r][c]) > cutoff) entries.push_back({r, c, rows[r][c]});
        }
    }
    if (rows.empty()) min_cutoff = 0.0;
    return SparseWeightMatrix(cluster_id, rows.size(), cols, std::move(entries), min_cutoff);
}

}  // namespace clam
