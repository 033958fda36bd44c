#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "prohecke/gf.hpp"

namespace prohecke::la {

using gf::FieldCtx;
using gf::FieldElt;

// Dense matrix over a finite field, entries stored as element codes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const FieldCtx* ctx, std::size_t rows, std::size_t cols)
      : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(const FieldCtx* ctx, std::size_t n);
  static Matrix from_rows(const FieldCtx* ctx, const std::vector<std::vector<FieldElt>>& rows);
  static Matrix from_ints(const FieldCtx* ctx, const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix column(const std::vector<FieldElt>& v);

  const FieldCtx* ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElt at(std::size_t i, std::size_t j) const { return {ctx_, data_[i * cols_ + j]}; }
  void set(std::size_t i, std::size_t j, const FieldElt& v);
  std::uint32_t code(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::uint32_t& code(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const FieldElt& c) const;
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;
  Matrix transpose() const;
  Matrix col(std::size_t j) const;
  Matrix cols_range(std::size_t begin, std::size_t end) const;
  Matrix hstack(const Matrix& o) const;
  Matrix vstack(const Matrix& o) const;
  std::vector<FieldElt> column_vector(std::size_t j) const;

 private:
  const FieldCtx* ctx_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> data_;
};

struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

Echelon rref(Matrix a);
std::size_t rank(const Matrix& a);
// Columns form a basis of {x : a x = 0}.
Matrix kernel(const Matrix& a);
// Columns form a basis of the column space of a (a subset of a's columns).
Matrix column_basis(const Matrix& a);
// Some x with a x = b, if one exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
std::optional<Matrix> inverse(const Matrix& a);

}  // namespace prohecke::la
