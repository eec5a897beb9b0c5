#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dgforge/scalar.hpp"

namespace dgforge {

// Dense matrix over an exact field. All operations are pure; values are
// immutable once built (entries are only assigned during construction).
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(const Field& f, std::size_t n);
    static Matrix zero(const Field& f, std::size_t rows, std::size_t cols) {
        return Matrix(f, rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    const Scalar& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    Scalar& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    bool is_zero() const;
    bool operator==(const Matrix& o) const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix scaled(const Scalar& c) const;
    Matrix transposed() const;

    Matrix column(std::size_t j) const;
    void set_column(std::size_t j, const Matrix& col);

    // Horizontal / vertical concatenation.
    static Matrix hcat(const Matrix& l, const Matrix& r);
    static Matrix vcat(const Matrix& t, const Matrix& b);

    std::string str() const;

  private:
    Field field_;
    std::size_t rows_, cols_;
    std::vector<Scalar> a_;
};

struct RowReduceResult {
    Matrix reduced;                    // reduced row-echelon form
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;   // pivot column indices
};

RowReduceResult row_reduce(const Matrix& m);

std::size_t rank(const Matrix& m);

// Columns form a basis of {v : m v = 0}; column count == cols(m) - rank(m).
Matrix kernel_basis(const Matrix& m);

// Solves m x = rhs (columnwise); empty iff some rhs column lies outside the
// column space. The result is re-verified by multiplication.
std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& rhs);

// Inverse of a square matrix, if it exists.
std::optional<Matrix> inverse(const Matrix& m);

// Basis of the column space (a subset of the input columns, by pivot).
Matrix column_space_basis(const Matrix& m);

// Rank of the span of the columns of [a | b] minus rank of a; used for
// "is b contained in span(a)" style tests.
bool columns_contained(const Matrix& span, const Matrix& probe);

}  // namespace dgforge
