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

#include <cstdint>
#include <numeric>
#include <vector>

namespace rpdhg {

// Calls `fn(indices)` for every k-subset of {0, ..., n-1} in lexicographic
// order. Enumeration stops early when `fn` returns false; the return value
// reports whether the enumeration ran to completion.
template <typename Fn>
bool for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// Visits every square k x k selection (rows, cols) with 1 <= k <= max_size,
// ordered by k, then rows, then columns (all lexicographic).
template <typename Fn>
bool for_each_square_selection(int n_rows, int n_cols, int max_size, Fn&& fn) {
  for (int k = 1; k <= max_size && k <= n_rows && k <= n_cols; ++k) {
    const bool done = for_each_combination(n_rows, k, [&](const std::vector<int>& rows) {
      return for_each_combination(n_cols, k, [&](const std::vector<int>& cols) {
        return fn(rows, cols);
      });
    });
    if (!done) return false;
  }
  return true;
}

// Iterates over all subsets of {0, ..., n-1} encoded as bit masks.
template <typename Fn>
void for_each_subset_mask(int n, Fn&& fn) {
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < end; ++mask) fn(mask);
}

}  // namespace rpdhg
