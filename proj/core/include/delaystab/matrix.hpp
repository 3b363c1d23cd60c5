#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "delaystab/errors.hpp"
#include "delaystab/rational.hpp"

namespace delaystab {

/// Small dense row-major matrix. Used with T = double (float path) and
/// T = Rational (exact path); the algorithms below are written once for both.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ShapeError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Leading k x k block.
  Matrix leading_block(std::size_t k) const {
    Matrix out(k, k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) out(r, c) = (*this)(r, c);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline Rational magnitude(const Rational& v) { return abs_exact(v); }

/// A pivot is "zero" when it is exactly zero (exact path) or below
/// `tolerance` (float path).
inline bool negligible(double v, double tolerance) { return std::abs(v) <= tolerance; }
inline bool negligible(const Rational& v, double) { return v == 0; }

}  // namespace detail

template <class T>
std::vector<T> multiply(const Matrix<T>& a, const std::vector<T>& x) {
  if (a.cols() != x.size()) throw ShapeError("matrix-vector dimension mismatch");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) y[r] += a(r, c) * x[c];
  return y;
}

/// Infinity norm (max absolute row sum).
template <class T>
T infinity_norm(const Matrix<T>& a) {
  T best(0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    T row(0);
    for (std::size_t c = 0; c < a.cols(); ++c) row += detail::magnitude(a(r, c));
    if (row > best) best = row;
  }
  return best;
}

/// Determinant by Gaussian elimination with partial pivoting. Pivots at or
/// below `tolerance` (float path only) make the result exactly zero.
template <class T>
T determinant(Matrix<T> a, double tolerance = 0.0) {
  if (!a.is_square()) throw ShapeError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (detail::magnitude(a(r, k)) > detail::magnitude(a(pivot, k))) pivot = r;
    if (detail::negligible(a(pivot, k), tolerance)) return T(0);
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == T(0)) continue;
      const T factor = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  return det;
}

/// Solves a x = b. Returns nullopt when a pivot is negligible.
template <class T>
std::optional<std::vector<T>> solve(Matrix<T> a, std::vector<T> b, double tolerance = 0.0) {
  if (!a.is_square() || a.rows() != b.size()) throw ShapeError("solve dimension mismatch");
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (detail::magnitude(a(r, k)) > detail::magnitude(a(pivot, k))) pivot = r;
    if (detail::negligible(a(pivot, k), tolerance)) return std::nullopt;
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == T(0)) continue;
      const T factor = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
      b[r] -= factor * b[k];
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t k = n; k-- > 0;) {
    T acc = b[k];
    for (std::size_t c = k + 1; c < n; ++c) acc -= a(k, c) * x[c];
    x[k] = acc / a(k, k);
  }
  return x;
}

inline Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = to_double(m(r, c));
  return out;
}

inline std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

}  // namespace delaystab
