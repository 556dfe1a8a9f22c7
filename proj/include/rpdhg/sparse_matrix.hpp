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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"

namespace rpdhg {

enum class ValueKind { kExactInteger, kFloat };

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Largest magnitude at which every integer is representable as a double.
inline constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

inline bool is_integral_value(double v) {
  return std::isfinite(v) && std::abs(v) <= kMaxExactInteger && std::floor(v) == v;
}

// Compressed-row sparse matrix with a compressed-column copy kept alongside,
// so both A x and A^T y stream through contiguous storage. Immutable once
// built.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Zero values are dropped. Duplicate or out-of-range entries are rejected.
  // kExactInteger is inferred when every stored value is an integer of
  // magnitude at most 2^53, unless `force_float` is set.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries, bool force_float = false) {
    require(rows >= 0 && cols >= 0, ErrorCode::kInvalidArgument, "negative matrix dimension");
    for (const Triplet& t : entries) {
      require(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols, ErrorCode::kInvalidArgument,
              "entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) + ") out of range");
      require(std::isfinite(t.value), ErrorCode::kInvalidArgument, "non-finite matrix entry");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t k = 1; k < entries.size(); ++k) {
      require(entries[k].row != entries[k - 1].row || entries[k].col != entries[k - 1].col,
              ErrorCode::kInvalidArgument,
              "duplicate entry (" + std::to_string(entries[k].row) + ", " + std::to_string(entries[k].col) + ")");
    }
    std::erase_if(entries, [](const Triplet& t) { return t.value == 0.0; });

    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_start_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_index_.reserve(entries.size());
    m.values_.reserve(entries.size());
    bool all_integer = true;
    for (const Triplet& t : entries) {
      ++m.row_start_[static_cast<std::size_t>(t.row) + 1];
      m.col_index_.push_back(t.col);
      m.values_.push_back(t.value);
      all_integer = all_integer && is_integral_value(t.value);
    }
    for (int i = 0; i < rows; ++i) {
      m.row_start_[static_cast<std::size_t>(i) + 1] += m.row_start_[static_cast<std::size_t>(i)];
    }
    m.kind_ = (all_integer && !force_float) ? ValueKind::kExactInteger : ValueKind::kFloat;
    m.build_column_copy();
    return m;
  }

  static SparseMatrix from_dense(const Eigen::MatrixXd& dense, bool force_float = false) {
    std::vector<Triplet> entries;
    for (int i = 0; i < dense.rows(); ++i) {
      for (int j = 0; j < dense.cols(); ++j) {
        if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
      }
    }
    return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()), std::move(entries),
                         force_float);
  }

  static SparseMatrix identity(int n) {
    std::vector<Triplet> entries;
    for (int i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(entries));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }
  ValueKind kind() const { return kind_; }
  bool is_exact_integer() const { return kind_ == ValueKind::kExactInteger; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const {
    require(x.size() == cols_, ErrorCode::kDimensionMismatch, "A x: vector length does not match columns");
    Eigen::VectorXd out(rows_);
    for (int i = 0; i < rows_; ++i) {
      double acc = 0.0;
      for (auto k = row_start_[static_cast<std::size_t>(i)]; k < row_start_[static_cast<std::size_t>(i) + 1]; ++k) {
        acc += values_[k] * x[col_index_[k]];
      }
      out[i] = acc;
    }
    return out;
  }

  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& y) const {
    require(y.size() == rows_, ErrorCode::kDimensionMismatch, "A^T y: vector length does not match rows");
    Eigen::VectorXd out(cols_);
    for (int j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (auto k = col_start_[static_cast<std::size_t>(j)]; k < col_start_[static_cast<std::size_t>(j) + 1]; ++k) {
        acc += col_values_[k] * y[row_index_[k]];
      }
      out[j] = acc;
    }
    return out;
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (int i = 0; i < rows_; ++i) {
      for (auto k = row_start_[static_cast<std::size_t>(i)]; k < row_start_[static_cast<std::size_t>(i) + 1]; ++k) {
        out.push_back({i, col_index_[k], values_[k]});
      }
    }
    return out;
  }

  double coeff(int i, int j) const {
    const auto begin = col_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(i)]);
    const auto end = col_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[static_cast<std::size_t>(i) + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_index_.begin())];
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const Triplet& t : triplets()) out(t.row, t.col) = t.value;
    return out;
  }

  exact::RationalMatrix to_rational() const {
    exact::RationalMatrix out(rows_, cols_);
    for (const Triplet& t : triplets()) out(t.row, t.col) = exact::from_double(t.value);
    return out;
  }

  SparseMatrix transpose() const {
    std::vector<Triplet> entries;
    for (const Triplet& t : triplets()) entries.push_back({t.col, t.row, t.value});
    return from_triplets(cols_, rows_, std::move(entries), kind_ == ValueKind::kFloat);
  }

  SparseMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    std::vector<int> col_pos(static_cast<std::size_t>(cols_), -1);
    for (std::size_t j = 0; j < cols.size(); ++j) col_pos[static_cast<std::size_t>(cols[j])] = static_cast<int>(j);
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const int r = rows[i];
      for (auto k = row_start_[static_cast<std::size_t>(r)]; k < row_start_[static_cast<std::size_t>(r) + 1]; ++k) {
        const int p = col_pos[static_cast<std::size_t>(col_index_[k])];
        if (p >= 0) entries.push_back({static_cast<int>(i), p, values_[k]});
      }
    }
    return from_triplets(static_cast<int>(rows.size()), static_cast<int>(cols.size()), std::move(entries),
                         kind_ == ValueKind::kFloat);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_start_ == b.row_start_ &&
           a.col_index_ == b.col_index_ && a.values_ == b.values_;
  }

 private:
  void build_column_copy() {
    col_start_.assign(static_cast<std::size_t>(cols_) + 1, 0);
    for (int c : col_index_) ++col_start_[static_cast<std::size_t>(c) + 1];
    for (int j = 0; j < cols_; ++j) {
      col_start_[static_cast<std::size_t>(j) + 1] += col_start_[static_cast<std::size_t>(j)];
    }
    row_index_.assign(values_.size(), 0);
    col_values_.assign(values_.size(), 0.0);
    std::vector<std::size_t> next(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < rows_; ++i) {
      for (auto k = row_start_[static_cast<std::size_t>(i)]; k < row_start_[static_cast<std::size_t>(i) + 1]; ++k) {
        const std::size_t dst = next[static_cast<std::size_t>(col_index_[k])]++;
        row_index_[dst] = i;
        col_values_[dst] = values_[k];
      }
    }
  }

  int rows_ = 0;
  int cols_ = 0;
  ValueKind kind_ = ValueKind::kExactInteger;
  std::vector<std::size_t> row_start_{0};
  std::vector<int> col_index_;
  std::vector<double> values_;
  std::vector<std::size_t> col_start_{0};
  std::vector<int> row_index_;
  std::vector<double> col_values_;
};

// Anything usable as the constraint operator inside the solver loop.
template <typename Op>
concept LinearOperator = requires(Op& op, const Eigen::VectorXd& v) {
  { op.multiply(v) } -> std::convertible_to<Eigen::VectorXd>;
  { op.multiply_transpose(v) } -> std::convertible_to<Eigen::VectorXd>;
};

// Wraps a matrix and counts every product taken through it.
class CountingOperator {
 public:
  explicit CountingOperator(const SparseMatrix& a) : a_(&a) {}

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) {
    ++count_;
    return a_->multiply(x);
  }
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& y) {
    ++count_;
    return a_->multiply_transpose(y);
  }

  std::int64_t count() const { return count_; }
  const SparseMatrix& matrix() const { return *a_; }

 private:
  const SparseMatrix* a_;
  std::int64_t count_ = 0;
};

}  // namespace rpdhg
