// Copyright 2026 The rpdhg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact integer and rational linear algebra for the certification paths.
// Everything here is O(n^3) on small dense matrices; callers are expected to
// stay at desk scale.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "rpdhg/errors.hpp"

namespace rpdhg::exact {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double (every double is a dyadic rational).
inline Rational from_double(double v) {
  require(std::isfinite(v), ErrorCode::kInvalidArgument, "non-finite value cannot be made exact");
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{Integer(scaled)};
  if (exponent > 0) {
    r *= Rational(Integer(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(Integer(1) << -exponent);
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const Integer& i) { return i.convert_to<double>(); }

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

inline Integer abs(const Integer& i) { return i < 0 ? Integer(-i) : i; }

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  DenseMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    DenseMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (int i = 0; i < out.rows(); ++i) {
      for (int j = 0; j < out.cols(); ++j) {
        out(i, j) = (*this)(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      }
    }
    return out;
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd out(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out(i, j) = to_double((*this)(i, j));
    }
    return out;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = DenseMatrix<Integer>;
using RationalMatrix = DenseMatrix<Rational>;

inline RationalMatrix from_eigen(const Eigen::MatrixXd& m) {
  RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < out.cols(); ++j) out(i, j) = from_double(m(i, j));
  }
  return out;
}

// Fraction-free Gaussian elimination. Intermediate values stay integral and
// are bounded by subdeterminants of the input.
inline Integer bareiss_determinant(IntegerMatrix m) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return Integer(1);
  int sign = 1;
  Integer prev(1);
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m(i, k) != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return Integer(0);
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : Integer(-m(n - 1, n - 1));
}

// Multiplies each row by the lcm of its denominators. Row scaling by nonzero
// integers preserves rank and nonsingularity of every row/column selection.
inline IntegerMatrix scale_rows_to_integer(const RationalMatrix& m, std::vector<Integer>* scales = nullptr) {
  IntegerMatrix out(m.rows(), m.cols());
  if (scales != nullptr) scales->assign(static_cast<std::size_t>(m.rows()), Integer(1));
  for (int i = 0; i < m.rows(); ++i) {
    Integer l(1);
    for (int j = 0; j < m.cols(); ++j) {
      l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(m(i, j))));
    }
    for (int j = 0; j < m.cols(); ++j) {
      const Rational scaled = m(i, j) * Rational(l);
      out(i, j) = boost::multiprecision::numerator(scaled);
    }
    if (scales != nullptr) (*scales)[static_cast<std::size_t>(i)] = l;
  }
  return out;
}

inline Rational determinant(const RationalMatrix& m) {
  std::vector<Integer> scales;
  const IntegerMatrix scaled = scale_rows_to_integer(m, &scales);
  Rational det(bareiss_determinant(scaled));
  for (const Integer& s : scales) det /= Rational(s);
  return det;
}

// Row echelon form over the rationals. Returns the pivot columns in order.
inline std::vector<int> row_reduce(RationalMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (m(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(pivot, j));
    }
    for (int i = row + 1; i < m.rows(); ++i) {
      if (m(i, col) == 0) continue;
      const Rational factor = m(i, col) / m(row, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(RationalMatrix m) { return static_cast<int>(row_reduce(m).size()); }

// Indices of a maximal linearly independent set of rows, chosen greedily in
// index order.
inline std::vector<int> independent_rows(const RationalMatrix& m) {
  std::vector<int> kept;
  RationalMatrix basis(0, m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    RationalMatrix trial(static_cast<int>(kept.size()) + 1, m.cols());
    for (std::size_t r = 0; r < kept.size(); ++r) {
      for (int j = 0; j < m.cols(); ++j) trial(static_cast<int>(r), j) = m(kept[r], j);
    }
    for (int j = 0; j < m.cols(); ++j) trial(static_cast<int>(kept.size()), j) = m(i, j);
    if (rank(trial) == static_cast<int>(kept.size()) + 1) kept.push_back(i);
  }
  return kept;
}

// Gauss-Jordan inverse; std::nullopt when singular.
inline std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "inverse of a non-square matrix");
  const int n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i) {
      if (aug(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < 2 * n; ++j) std::swap(aug(col, j), aug(pivot, j));
    }
    const Rational inv_pivot = Rational(1) / aug(col, col);
    for (int j = 0; j < 2 * n; ++j) aug(col, j) *= inv_pivot;
    for (int i = 0; i < n; ++i) {
      if (i == col || aug(i, col) == 0) continue;
      const Rational factor = aug(i, col);
      for (int j = 0; j < 2 * n; ++j) aug(i, j) -= factor * aug(col, j);
    }
  }
  RationalMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  }
  return out;
}

// Solves the square system m * x = rhs; std::nullopt when m is singular.
inline std::optional<std::vector<Rational>> solve(const RationalMatrix& m, const std::vector<Rational>& rhs) {
  require(m.rows() == m.cols() && static_cast<int>(rhs.size()) == m.rows(), ErrorCode::kDimensionMismatch,
          "solve: dimension mismatch");
  const int n = m.rows();
  RationalMatrix aug(n, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = rhs[static_cast<std::size_t>(i)];
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i) {
      if (aug(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j <= n; ++j) std::swap(aug(col, j), aug(pivot, j));
    }
    for (int i = col + 1; i < n; ++i) {
      if (aug(i, col) == 0) continue;
      const Rational factor = aug(i, col) / aug(col, col);
      for (int j = col; j <= n; ++j) aug(i, j) -= factor * aug(col, j);
    }
  }
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    Rational acc = aug(i, n);
    for (int j = i + 1; j < n; ++j) acc -= aug(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = acc / aug(i, i);
  }
  return x;
}

inline std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Rational& r : v) out.push_back(to_double(r));
  return out;
}

}  // namespace rpdhg::exact
