#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <type_traits>
#include <utility>
#include <vector>

#include "rgkit/errors.hpp"

namespace rgkit {

// Dense row-major matrix usable with exact (Rational, BigInt) and floating scalars.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Submatrix keeping the listed rows and columns, in the given order.
  Matrix select(const std::vector<std::size_t>& keep_rows, const std::vector<std::size_t>& keep_cols) const {
    Matrix s(keep_rows.size(), keep_cols.size());
    for (std::size_t a = 0; a < keep_rows.size(); ++a)
      for (std::size_t b = 0; b < keep_cols.size(); ++b) s(a, b) = (*this)(keep_rows[a], keep_cols[b]);
    return s;
  }

  // Minor with row r and column c removed.
  Matrix without(std::size_t r, std::size_t c) const {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < rows_; ++i)
      if (i != r) rs.push_back(i);
    for (std::size_t j = 0; j < cols_; ++j)
      if (j != c) cs.push_back(j);
    return select(rs, cs);
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw InputError("matrix product dimension mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  Matrix operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum dimension mismatch");
    Matrix s(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] += o.data_[k];
    return s;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = U((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Determinant by Gaussian elimination. Exact for field types (Rational);
// partial pivoting for floating types. Empty matrix has determinant 1.
template <class T>
T determinant(Matrix<T> a) {
  if (!a.square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_floating_point_v<T>) {
      T best(0);
      for (std::size_t r = col; r < n; ++r)
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          pivot = r;
        }
    } else {
      for (std::size_t r = col; r < n; ++r)
        if (a(r, col) != T(0)) {
          pivot = r;
          break;
        }
    }
    if (pivot == n) return T(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    const T p = a(col, col);
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      const T f = a(r, col) / p;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

// Fraction-free Bareiss elimination; exact for integer types.
template <class T>
T bareiss_determinant(Matrix<T> a) {
  if (!a.square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  T sign(1);
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == T(0)) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a(swap_row, k) == T(0)) ++swap_row;
      if (swap_row == n) return T(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// Laplace expansion along the first row; factorial cost, used as an oracle.
template <class T>
T cofactor_determinant(const Matrix<T>& a) {
  if (!a.square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  if (n == 1) return a(0, 0);
  T det(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j) == T(0)) continue;
    T term = a(0, j) * cofactor_determinant(a.without(0, j));
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

// Rank over a field by row reduction (exact for Rational).
template <class T>
std::size_t rank(Matrix<T> a) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i)
      if (a(i, col) != T(0)) {
        pivot = i;
        break;
      }
    if (pivot == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(r, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, col) == T(0)) continue;
      const T f = a(i, col) / a(r, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

// Sign of a permutation given as an image vector.
inline int permutation_sign(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace rgkit
