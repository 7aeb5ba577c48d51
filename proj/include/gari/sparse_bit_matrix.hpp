#ifndef GARI_SPARSE_BIT_MATRIX_HPP
#define GARI_SPARSE_BIT_MATRIX_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gari/errors.hpp"

namespace gari {

using Entry = std::pair<std::uint32_t, std::uint32_t>; // (row, col)

/// Immutable GF(2) sparse matrix in coordinate form with CSR/CSC indexes
/// built once at construction. Entries are kept sorted (row, col) ascending
/// with no duplicates; all accessors assume that invariant.
class SparseBitMatrix {
public:
    SparseBitMatrix() = default;

    SparseBitMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Entry> entries)
        : rows_(n_rows), cols_(n_cols), entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end());
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& [r, c] = entries_[i];
            if (r >= rows_ || c >= cols_)
                throw invalid_input("SparseBitMatrix: entry out of bounds");
            if (i > 0 && entries_[i] == entries_[i - 1])
                throw invalid_input("SparseBitMatrix: duplicate entry");
        }
        build_indexes();
    }

    static SparseBitMatrix identity(std::size_t n) {
        std::vector<Entry> e;
        e.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) e.emplace_back(i, i);
        return {n, n, std::move(e)};
    }

    std::size_t n_rows() const { return rows_; }
    std::size_t n_cols() const { return cols_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t n_entries() const { return entries_.size(); }

    /// Column indices of row r (ascending); CSR order, so the e-th edge of
    /// the matrix is row_begin(r)+k for the k-th slot of check r.
    std::span<const std::uint32_t> row(std::size_t r) const {
        return {row_cols_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
    }
    std::size_t row_begin(std::size_t r) const { return row_ptr_[r]; }
    std::size_t row_degree(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

    /// Row indices of column c (ascending).
    std::span<const std::uint32_t> col(std::size_t c) const {
        return {col_rows_.data() + col_ptr_[c], col_ptr_[c + 1] - col_ptr_[c]};
    }
    std::size_t col_degree(std::size_t c) const { return col_ptr_[c + 1] - col_ptr_[c]; }

    bool operator==(const SparseBitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

    /// y = M x over GF(2).
    std::vector<std::uint8_t> mul_vec(std::span<const std::uint8_t> x) const {
        if (x.size() != cols_) throw invalid_input("mul_vec: length mismatch");
        std::vector<std::uint8_t> y(rows_, 0);
        for (std::size_t c = 0; c < cols_; ++c)
            if (x[c] & 1)
                for (auto r : col(c)) y[r] ^= 1;
        return y;
    }

    /// M * B over GF(2).
    SparseBitMatrix multiply(const SparseBitMatrix& b) const {
        if (cols_ != b.n_rows()) throw invalid_input("multiply: dimension mismatch");
        std::vector<Entry> out;
        std::vector<std::uint8_t> acc(rows_, 0);
        std::vector<std::uint32_t> touched;
        for (std::uint32_t bc = 0; bc < b.n_cols(); ++bc) {
            touched.clear();
            for (auto br : b.col(bc))
                for (auto r : col(br)) {
                    if (!acc[r]) touched.push_back(r);
                    acc[r] ^= 1;
                }
            for (auto r : touched) {
                if (acc[r]) out.emplace_back(r, bc);
                acc[r] = 0;
            }
        }
        return {rows_, b.n_cols(), std::move(out)};
    }

    SparseBitMatrix transposed() const {
        std::vector<Entry> e;
        e.reserve(entries_.size());
        for (const auto& [r, c] : entries_) e.emplace_back(c, r);
        return {cols_, rows_, std::move(e)};
    }

    /// Dense bit dump of column c, usable as a map key for column matching.
    std::vector<std::uint32_t> column_key(std::size_t c) const {
        auto rows = col(c);
        return {rows.begin(), rows.end()};
    }

    bool has_duplicate_columns() const {
        std::vector<std::vector<std::uint32_t>> keys;
        keys.reserve(cols_);
        for (std::size_t c = 0; c < cols_; ++c) keys.push_back(column_key(c));
        std::sort(keys.begin(), keys.end());
        return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
    }

private:
    void build_indexes() {
        row_ptr_.assign(rows_ + 1, 0);
        col_ptr_.assign(cols_ + 1, 0);
        for (const auto& [r, c] : entries_) {
            ++row_ptr_[r + 1];
            ++col_ptr_[c + 1];
        }
        for (std::size_t i = 1; i <= rows_; ++i) row_ptr_[i] += row_ptr_[i - 1];
        for (std::size_t i = 1; i <= cols_; ++i) col_ptr_[i] += col_ptr_[i - 1];
        row_cols_.resize(entries_.size());
        col_rows_.resize(entries_.size());
        std::vector<std::size_t> rfill(row_ptr_.begin(), row_ptr_.end() - 1);
        std::vector<std::size_t> cfill(col_ptr_.begin(), col_ptr_.end() - 1);
        for (const auto& [r, c] : entries_) {
            row_cols_[rfill[r]++] = c;
            col_rows_[cfill[c]++] = r;
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> row_cols_;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::uint32_t> col_rows_;
};

} // namespace gari

#endif
