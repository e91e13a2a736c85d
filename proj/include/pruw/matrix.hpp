// Copyright 2026 The pruw authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pruw/error.hpp"
#include "pruw/field.hpp"

namespace pruw {

using Vec = std::vector<Elem>;

/// Dense row-major matrix over a prime field. Arithmetic goes through the
/// free functions below, which take the Field explicitly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Elem> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    PRUW_ENFORCE(data_.size() == rows_ * cols_, Errc::dimension_mismatch,
                 "matrix data size does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Elem{1};
    return m;
  }

  /// Build from small integer literals (test fixtures, reference displays).
  static Matrix from_rows(const Field& F,
                          std::initializer_list<std::initializer_list<long long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      PRUW_ENFORCE(row.size() == c, Errc::dimension_mismatch, "ragged rows");
      std::size_t j = 0;
      for (long long v : row) m(i, j++) = F.from_int(v);
      ++i;
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  Elem at(std::size_t i, std::size_t j) const {
    PRUW_ENFORCE(i < rows_ && j < cols_, Errc::index_out_of_range,
                 "matrix index out of range");
    return data_[i * cols_ + j];
  }

  std::span<const Elem> data() const noexcept { return data_; }
  std::span<Elem> data() noexcept { return data_; }

  Vec column(std::size_t j) const {
    PRUW_ENFORCE(j < cols_, Errc::index_out_of_range, "column out of range");
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

inline Matrix add(const Field& F, const Matrix& a, const Matrix& b) {
  PRUW_ENFORCE(a.rows() == b.rows() && a.cols() == b.cols(),
               Errc::dimension_mismatch, "add: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = F.add(a(i, j), b(i, j));
  return out;
}

inline Matrix scale(const Field& F, Elem s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = F.mul(s, a(i, j));
  return out;
}

inline Matrix mul(const Field& F, const Matrix& a, const Matrix& b) {
  PRUW_ENFORCE(a.cols() == b.rows(), Errc::dimension_mismatch,
               "mul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Elem aik = a(i, k);
      if (aik.v == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = F.mul_add(out(i, j), aik, b(k, j));
      }
    }
  }
  return out;
}

inline Vec mul(const Field& F, const Matrix& a, std::span<const Elem> x) {
  PRUW_ENFORCE(a.cols() == x.size(), Errc::dimension_mismatch,
               "matvec: length mismatch");
  Vec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Elem acc{0};
    for (std::size_t j = 0; j < a.cols(); ++j) acc = F.mul_add(acc, a(i, j), x[j]);
    out[i] = acc;
  }
  return out;
}

inline Elem dot(const Field& F, std::span<const Elem> a, std::span<const Elem> b) {
  PRUW_ENFORCE(a.size() == b.size(), Errc::dimension_mismatch,
               "dot: length mismatch");
  Elem acc{0};
  for (std::size_t i = 0; i < a.size(); ++i) acc = F.mul_add(acc, a[i], b[i]);
  return acc;
}

inline Matrix kron(const Field& F, const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Elem aij = a(i, j);
      if (aij.v == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = F.mul(aij, b(k, l));
    }
  return out;
}

inline Matrix diagonal(std::span<const Elem> d) {
  Matrix out(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
  return out;
}

inline Matrix block_diagonal(std::span<const Matrix> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix out(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

inline Matrix submatrix(const Matrix& a, std::size_t r0, std::size_t c0,
                        std::size_t rows, std::size_t cols) {
  PRUW_ENFORCE(r0 + rows <= a.rows() && c0 + cols <= a.cols(),
               Errc::index_out_of_range, "submatrix out of range");
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(r0 + i, c0 + j);
  return out;
}

/// Gaussian elimination with first-nonzero pivoting. Exact over F_q.
inline Vec solve_linear(const Field& F, Matrix a, Vec rhs) {
  PRUW_ENFORCE(a.square() && a.rows() == rhs.size(), Errc::dimension_mismatch,
               "solve_linear: need square system matching rhs");
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).v == 0) ++piv;
    PRUW_ENFORCE(piv < n, Errc::singular_system,
                 "matrix is singular at column " + std::to_string(col));
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(rhs[piv], rhs[col]);
    }
    Elem inv = F.inv(a(col, col));
    for (std::size_t j = col; j < n; ++j) a(col, j) = F.mul(a(col, j), inv);
    rhs[col] = F.mul(rhs[col], inv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col).v == 0) continue;
      Elem factor = a(i, col);
      for (std::size_t j = col; j < n; ++j)
        a(i, j) = F.sub(a(i, j), F.mul(factor, a(col, j)));
      rhs[i] = F.sub(rhs[i], F.mul(factor, rhs[col]));
    }
  }
  return rhs;
}

inline Matrix invert(const Field& F, const Matrix& a) {
  PRUW_ENFORCE(a.square(), Errc::dimension_mismatch, "invert: not square");
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n);
    e[j] = F.one();
    Vec col = solve_linear(F, a, std::move(e));
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

}  // namespace pruw
