#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "quatperiod/rational.hpp"

namespace quatperiod {

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ArgumentError("ragged matrix literal");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  void set_row(std::size_t r, const std::vector<T>& v) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = v[c];
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw ArgumentError("matrix dimension mismatch in product");
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }
  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
    return out;
  }
  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
    return out;
  }
  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& v : out.data_) v *= s;
    return out;
  }
  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw ArgumentError("vector length mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  /// Row vector times matrix.
  std::vector<T> left_apply(const std::vector<T>& v) const {
    if (v.size() != rows_) throw ArgumentError("vector length mismatch");
    std::vector<T> out(cols_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
    }
    return out;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("matrix shape mismatch");
  }
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using ZMatrix = Matrix<Integer>;
using QVector = std::vector<Rational>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& m);
std::size_t rank(QMatrix m);
Rational determinant(QMatrix m);
QMatrix inverse(const QMatrix& m);
/// Basis of {x : m x = 0} as rows of the returned matrix.
QMatrix kernel(const QMatrix& m);
/// Some solution of m x = b; throws StructuralError when inconsistent.
QVector solve(const QMatrix& m, const QVector& b);
/// Solves x m = b for row vector x (m has full row rank).
QVector solve_left(const QMatrix& m, const QVector& b);
/// Coefficients c_0..c_n of det(x I - m), c_n = 1.
QVector characteristic_polynomial(const QMatrix& m);
/// Rows forming a basis of the row space.
QMatrix row_space_basis(const QMatrix& m);

/// Row Hermite normal form of an integer matrix; zero rows removed.
/// The rows of the result generate the same Z-module as the rows of m.
ZMatrix hermite_normal_form(const ZMatrix& m);

ZMatrix to_integer_matrix(const QMatrix& m);
QMatrix to_rational_matrix(const ZMatrix& m);

Rational dot(const QVector& a, const QVector& b);

std::string matrix_to_string(const QMatrix& m);

}  // namespace quatperiod
