#pragma once

#include "k3lines/numeric.hpp"

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

namespace k3lines {

// Dense row-major matrix over an exact ring.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
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

  static Matrix diagonal(std::span<const T> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  T& at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    return data_[i * cols_ + j];
  }
  const T& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    return data_[i * cols_ + j];
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
  }
  void set_column(std::size_t j, std::span<const T> c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  // Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const {
    Matrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }
  Matrix rows_slice(std::size_t first, std::size_t count) const {
    Matrix m(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += f * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& f) {
    if (f == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += f * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& f) {
    if (f == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += f * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator<(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.data_ < b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<T> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (i) os << ',';
      os << '[';
      for (std::size_t j = 0; j < m.cols_; ++j) {
        if (j) os << ',';
        os << m(i, j);
      }
      os << ']';
    }
    return os << ']';
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

template <typename To, typename From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  Matrix<To> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = To(m(i, j));
  return r;
}

// Integer matrix from a rational one whose entries are all integral.
inline IntegerMatrix to_integer_matrix(const RationalMatrix& m) {
  IntegerMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (denominator(m(i, j)) != 1) throw Error("matrix entry is not integral");
      r(i, j) = numerator(m(i, j));
    }
  return r;
}

inline bool is_integral(const RationalMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](const Rational& x) { return denominator(x) == 1; });
}

// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntegerMatrix a) {
  if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sgn = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sgn = -sgn;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sgn * a(n - 1, n - 1);
}

inline Rational determinant(RationalMatrix a) {
  if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) a.add_row(i, k, -a(i, k) / a(k, k));
  }
  return det;
}

// Inverse over Q; throws on singular input.
inline RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error("singular matrix");
    a.swap_rows(k, p);
    inv.swap_rows(k, p);
    Rational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = -a(i, k);
      a.add_row(i, k, f);
      inv.add_row(i, k, f);
    }
  }
  return inv;
}

inline RationalMatrix inverse(const IntegerMatrix& m) { return inverse(matrix_cast<Rational>(m)); }

// Rank over Q.
inline std::size_t rank(const RationalMatrix& m) {
  RationalMatrix a = m;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    for (std::size_t i = r + 1; i < a.rows(); ++i) a.add_row(i, r, -a(i, c) / a(r, c));
    ++r;
  }
  return r;
}
inline std::size_t rank(const IntegerMatrix& m) { return rank(matrix_cast<Rational>(m)); }

// Vector with integer numerators over a common positive denominator, kept in lowest terms.
class RationalVector {
 public:
  RationalVector() = default;
  explicit RationalVector(std::vector<Integer> numerators, Integer denominator = 1)
      : num_(std::move(numerators)), den_(std::move(denominator)) {
    normalize();
  }
  explicit RationalVector(const std::vector<Rational>& values) {
    den_ = 1;
    for (const auto& v : values) den_ = lcm(den_, k3lines::denominator(v));
    num_.reserve(values.size());
    for (const auto& v : values) num_.push_back(k3lines::numerator(v) * (den_ / k3lines::denominator(v)));
    normalize();
  }

  std::size_t size() const { return num_.size(); }
  const std::vector<Integer>& numerators() const { return num_; }
  const Integer& denominator() const { return den_; }
  Rational operator[](std::size_t i) const { return Rational(num_[i], den_); }
  std::vector<Rational> values() const {
    std::vector<Rational> v;
    v.reserve(num_.size());
    for (const auto& x : num_) v.emplace_back(x, den_);
    return v;
  }
  bool integral() const { return den_ == 1; }

  friend bool operator==(const RationalVector&, const RationalVector&) = default;

 private:
  void normalize() {
    if (den_ == 0) throw InputError("rational vector with zero denominator");
    if (den_ < 0) {
      den_ = -den_;
      for (auto& x : num_) x = -x;
    }
    Integer g = den_;
    for (const auto& x : num_) g = gcd(g, x);
    if (g > 1) {
      den_ /= g;
      for (auto& x : num_) x /= g;
    }
  }

  std::vector<Integer> num_;
  Integer den_ = 1;
};

}  // namespace k3lines
