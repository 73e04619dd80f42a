#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gqw/errors.hpp"
#include "gqw/rational.hpp"

namespace gqw {

using RatVector = std::vector<Rational>;

/// Dense row-major matrix over the rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static RatMatrix identity(std::size_t k) {
    RatMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix column(const RatVector& v) {
    RatMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVector column_vector(std::size_t j) const {
    RatVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Copy with the listed rows and columns deleted (indices need not be sorted).
  RatMatrix without(const std::vector<std::size_t>& drop_rows, const std::vector<std::size_t>& drop_cols) const {
    auto keep = [](std::size_t n, const std::vector<std::size_t>& drop) {
      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < n; ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) kept.push_back(i);
      return kept;
    };
    const auto r = keep(rows_, drop_rows);
    const auto c = keep(cols_, drop_cols);
    RatMatrix m(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = (*this)(r[i], c[j]);
    return m;
  }

  /// Copy keeping only the listed columns, in the given order.
  RatMatrix select_columns(const std::vector<std::size_t>& cols) const {
    RatMatrix m(rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(i, cols[j]);
    return m;
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) {
    a.require_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) {
    a.require_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend RatMatrix operator*(const Rational& s, RatMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    RatMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend RatVector operator*(const RatMatrix& a, const RatVector& x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    RatVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (a(i, j) != 0) y[i] += a(i, j) * x[j];
    return y;
  }

  friend std::ostream& operator<<(std::ostream& os, const RatMatrix& m) {
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << '[';
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << to_string(m(i, j));
      os << "]\n";
    }
    return os;
  }

 private:
  void require_same_shape(const RatMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RowEchelon {
  RatMatrix reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank() const noexcept { return pivot_columns.size(); }
};

/// Gauss-Jordan reduction to reduced row echelon form. Pivots are taken only
/// in the first `pivot_limit` columns (the coefficient block of an augmented
/// system); the remaining columns are carried along. Pivot choice is the first
/// nonzero entry in column order.
inline RowEchelon reduced_row_echelon(RatMatrix m, std::optional<std::size_t> pivot_limit = std::nullopt) {
  const std::size_t limit = std::min(pivot_limit.value_or(m.cols()), m.cols());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (m(row, j) != 0) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return reduced_row_echelon(m).rank(); }

/// Basis of the right null space, one basis vector per column.
inline RatMatrix nullspace(const RatMatrix& m) {
  const auto ech = reduced_row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivot_columns) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  RatMatrix basis(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    basis(f, k) = 1;
    for (std::size_t r = 0; r < ech.rank(); ++r) basis(ech.pivot_columns[r], k) = -ech.reduced(r, f);
  }
  return basis;
}

/// Exact solution X of M X = B for square nonsingular M. The residual is
/// re-checked before returning.
inline RatMatrix solve(const RatMatrix& m, const RatMatrix& b) {
  if (!m.square()) throw std::invalid_argument("solve: matrix is not square");
  if (b.rows() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  const std::size_t k = m.rows();
  RatMatrix aug(k, k + b.cols());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = m(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, k + j) = b(i, j);
  }
  const auto ech = reduced_row_echelon(std::move(aug), k);
  if (ech.rank() < k) throw SingularMatrixError(ech.rank(), k);
  RatMatrix x(k, b.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = ech.reduced(i, k + j);
  if (m * x != b) throw OracleMismatch("solve: nonzero residual");
  return x;
}

inline RatVector solve(const RatMatrix& m, const RatVector& b) {
  return solve(m, RatMatrix::column(b)).column_vector(0);
}

/// Solution of a possibly rectangular system A x = b, or nullopt when the
/// system is inconsistent. Free variables are set to zero.
inline std::optional<RatVector> solve_consistent(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_consistent: right-hand side has wrong length");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto ech = reduced_row_echelon(std::move(aug), a.cols());
  for (std::size_t i = ech.rank(); i < a.rows(); ++i)
    if (ech.reduced(i, a.cols()) != 0) return std::nullopt;
  RatVector x(a.cols());
  for (std::size_t r = 0; r < ech.rank(); ++r) x[ech.pivot_columns[r]] = ech.reduced(r, a.cols());
  return x;
}

/// Exact determinant by Gaussian elimination with sign tracking.
inline Rational det(RatMatrix m) {
  if (!m.square()) throw std::invalid_argument("det: matrix is not square");
  const std::size_t k = m.rows();
  Rational result = 1;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t p = col;
    while (p < k && m(p, col) == 0) ++p;
    if (p == k) return 0;
    if (p != col) {
      for (std::size_t j = col; j < k; ++j) std::swap(m(p, j), m(col, j));
      result = -result;
    }
    result *= m(col, col);
    for (std::size_t i = col + 1; i < k; ++i) {
      if (m(i, col) == 0) continue;
      const Rational f = m(i, col) / m(col, col);
      for (std::size_t j = col; j < k; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return result;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace gqw
