#pragma once

// Sparse exact-rational matrices (row-major, each row sorted by column).

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace afc::concrete {

using Rational = mpq_class;

class Matrix {
 public:
  using Row = std::vector<std::pair<std::size_t, Rational>>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix from_dense(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  Rational at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& v);
  /// Replace a whole row; entries must have distinct columns.
  void set_row(std::size_t i, Row r);
  std::size_t nnz() const;
  bool is_zero() const { return nnz() == 0; }

  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(const Rational& c) const;
  Matrix transpose() const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  std::vector<Row> rows_;
  std::size_t cols_ = 0;
};

/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);
/// Block diagonal a ⊕ b.
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// Concatenate rows of blocks with equal column counts.
Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols);

struct Echelon {
  Matrix reduced;                   // nonzero rows of the reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each row
};

Echelon rref(const Matrix& m);
std::size_t rank(const Matrix& m);

}  // namespace afc::concrete
