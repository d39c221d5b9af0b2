#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "msr/field.hpp"

namespace msr {

// Dense row-major matrix of field symbols. The field is not stored; every
// arithmetic routine takes the PrimeField explicitly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Symbol> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Symbol& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Symbol operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<Symbol> column(std::size_t c) const;

  std::span<const Symbol> data() const noexcept { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  Matrix select_rows(std::span<const std::size_t> idx) const;
  Matrix select_columns(std::span<const std::size_t> idx) const;

  bool is_zero() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> data_;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

// Horizontal concatenation; all parts must share the row count.
Matrix hconcat(std::span<const Matrix> parts);

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b);
std::vector<Symbol> multiply(const PrimeField& f, const Matrix& a, std::span<const Symbol> x);

// Gaussian elimination, pivot = first nonzero entry in the column.
Symbol determinant(const PrimeField& f, Matrix a);
std::size_t rank(const PrimeField& f, Matrix a);

// nullopt when A is singular.
std::optional<Matrix> invert(const PrimeField& f, const Matrix& a);

// Unique x with A x = b for square A; nullopt when A is singular.
std::optional<std::vector<Symbol>> solve(const PrimeField& f, const Matrix& a, std::span<const Symbol> b);

// Indices of the first rows (in order) that form a basis of the row space.
std::vector<std::size_t> independent_rows(const PrimeField& f, const Matrix& a);

}  // namespace msr
