#pragma once

#include "sandpile/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sandpile {

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols);
    IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntegerMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);

    /// True iff every off-diagonal entry is zero.
    bool is_diagonal() const;

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Exact product; skips zero entries of the left factor.
IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);

IntegerMatrix transpose(const IntegerMatrix& m);

/// Determinant by dense fraction-free (Bareiss) elimination with row pivoting.
/// Every division performed is exact.
Integer bareiss_determinant(IntegerMatrix m);

/// Determinant of a symmetric matrix whose principal minors are all nonzero
/// (for instance a reduced graph Laplacian), by sparse Bareiss elimination
/// with symmetric minimum-degree pivot order. Rows untouched by a pivot step
/// are rescaled lazily: the factor accumulated over skipped steps telescopes
/// to a ratio of two pivots. Throws std::domain_error on a zero pivot.
Integer sparse_symmetric_determinant(const IntegerMatrix& m);

}  // namespace sandpile
