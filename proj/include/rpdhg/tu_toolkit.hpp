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

// Total unimodularity: brute-force certification with exact determinants,
// the closure constructions that preserve it, and generators for the TU LP
// families used as test instances (min-cost flow and assignment).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/combinatorics.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/sparse_matrix.hpp"

namespace rpdhg::tu {

// Square submatrices are enumerated exhaustively, so the smaller dimension is
// capped.
inline constexpr int kEnumerationGuard = 8;

struct TuWitness {
  std::vector<int> rows;
  std::vector<int> cols;
  exact::Integer determinant;
};

struct TuCertificate {
  bool verdict = false;
  std::optional<TuWitness> witness;
  std::int64_t submatrices_checked = 0;
};

inline exact::IntegerMatrix to_integer_matrix(const SparseMatrix& a) {
  require(a.is_exact_integer(), ErrorCode::kInvalidArgument, "matrix has non-integer entries");
  exact::IntegerMatrix out(a.rows(), a.cols());
  for (const Triplet& t : a.triplets()) out(t.row, t.col) = exact::Integer(static_cast<std::int64_t>(t.value));
  return out;
}

// Checks every square submatrix, smallest first; the first violation in
// (size, rows, cols) lexicographic order is returned as the witness.
inline TuCertificate is_totally_unimodular(const SparseMatrix& a, int guard = kEnumerationGuard) {
  const exact::IntegerMatrix m = to_integer_matrix(a);
  const int max_size = std::min(a.rows(), a.cols());
  require(max_size <= guard, ErrorCode::kGuardExceeded,
          "TU enumeration limited to min(rows, cols) <= " + std::to_string(guard) + ", got " +
              std::to_string(max_size));
  TuCertificate cert;
  cert.verdict = true;
  for_each_square_selection(a.rows(), a.cols(), max_size, [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    ++cert.submatrices_checked;
    exact::Integer det = exact::bareiss_determinant(m.submatrix(rows, cols));
    if (exact::abs(det) > 1) {
      cert.verdict = false;
      cert.witness = TuWitness{rows, cols, std::move(det)};
      return false;
    }
    return true;
  });
  return cert;
}

struct Arc {
  int tail = 0;
  int head = 0;
};

// Nodes are 0-based. Empty `costs` asks the generator to draw integer costs in
// [1, cost_bound] from its seed.
struct FlowInstanceSpec {
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<double> supplies;
  std::vector<double> costs;
  bool drop_last_row = true;
  int cost_bound = 10;

  void validate() const {
    require(num_nodes >= 2, ErrorCode::kInvalidArgument, "flow instance needs at least two nodes");
    require(!arcs.empty(), ErrorCode::kInvalidArgument, "flow instance needs at least one arc");
    for (const Arc& arc : arcs) {
      require(arc.tail >= 0 && arc.tail < num_nodes && arc.head >= 0 && arc.head < num_nodes,
              ErrorCode::kInvalidArgument, "arc endpoint out of range");
      require(arc.tail != arc.head, ErrorCode::kInvalidArgument, "self-loops are not allowed");
    }
    require(static_cast<int>(supplies.size()) == num_nodes, ErrorCode::kInvalidArgument,
            "expected one supply per node");
    std::int64_t total = 0;
    for (double s : supplies) {
      require(is_integral_value(s), ErrorCode::kInvalidArgument, "supplies must be integers");
      total += static_cast<std::int64_t>(s);
    }
    require(total == 0, ErrorCode::kInvalidArgument,
            "unbalanced supplies: they sum to " + std::to_string(total) + " instead of 0");
    require(costs.empty() || costs.size() == arcs.size(), ErrorCode::kInvalidArgument,
            "expected one cost per arc");
    for (double c : costs) require(is_integral_value(c), ErrorCode::kInvalidArgument, "costs must be integers");
    require(cost_bound >= 1, ErrorCode::kInvalidArgument, "cost bound must be positive");
  }
};

// Node-arc incidence: +1 where the arc leaves the node, -1 where it enters.
inline SparseMatrix incidence_matrix(int num_nodes, const std::vector<Arc>& arcs) {
  std::vector<Triplet> entries;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    entries.push_back({arcs[a].tail, static_cast<int>(a), 1.0});
    entries.push_back({arcs[a].head, static_cast<int>(a), -1.0});
  }
  return SparseMatrix::from_triplets(num_nodes, static_cast<int>(arcs.size()), std::move(entries));
}

inline StandardFormLP gen_min_cost_flow(const FlowInstanceSpec& spec, std::uint64_t seed = 0) {
  spec.validate();
  std::vector<double> costs = spec.costs;
  if (costs.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(1, spec.cost_bound);
    for (std::size_t a = 0; a < spec.arcs.size(); ++a) costs.push_back(dist(rng));
  }
  SparseMatrix a = incidence_matrix(spec.num_nodes, spec.arcs);
  int rows = spec.num_nodes;
  if (spec.drop_last_row) {
    --rows;
    std::vector<int> keep(static_cast<std::size_t>(rows));
    std::iota(keep.begin(), keep.end(), 0);
    std::vector<int> all_cols(spec.arcs.size());
    std::iota(all_cols.begin(), all_cols.end(), 0);
    a = a.submatrix(keep, all_cols);
  }
  Eigen::VectorXd b(rows);
  for (int i = 0; i < rows; ++i) b[i] = spec.supplies[static_cast<std::size_t>(i)];
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(costs.data(), static_cast<Eigen::Index>(costs.size()));
  return StandardFormLP(std::move(a), std::move(b), std::move(c));
}

// Random connected digraph. Supplies come from a 0/1 flow on the spanning
// tree arcs; a tree carries no circulation, so b is never zero.
inline FlowInstanceSpec random_flow_spec(int num_nodes, int num_arcs, int cost_bound, std::uint64_t seed) {
  require(num_nodes >= 2, ErrorCode::kInvalidArgument, "need at least two nodes");
  require(num_arcs >= num_nodes - 1 && num_arcs <= num_nodes * (num_nodes - 1), ErrorCode::kInvalidArgument,
          "arc count must allow a connected simple digraph");
  std::mt19937_64 rng(seed);
  FlowInstanceSpec spec;
  spec.num_nodes = num_nodes;
  spec.cost_bound = cost_bound;
  std::set<std::pair<int, int>> used;
  const auto coin = [&] { return (rng() >> 63) != 0; };
  for (int v = 1; v < num_nodes; ++v) {
    const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
    const Arc arc = coin() ? Arc{u, v} : Arc{v, u};
    spec.arcs.push_back(arc);
    used.insert({arc.tail, arc.head});
  }
  while (static_cast<int>(spec.arcs.size()) < num_arcs) {
    const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(num_nodes));
    const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(num_nodes));
    if (u == v || used.count({u, v}) != 0) continue;
    spec.arcs.push_back({u, v});
    used.insert({u, v});
  }
  std::vector<int> flow(spec.arcs.size(), 0);
  for (int a = 0; a < num_nodes - 1; ++a) flow[static_cast<std::size_t>(a)] = coin() ? 1 : 0;
  flow[0] = 1;
  spec.supplies.assign(static_cast<std::size_t>(num_nodes), 0.0);
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    spec.supplies[static_cast<std::size_t>(spec.arcs[a].tail)] += flow[a];
    spec.supplies[static_cast<std::size_t>(spec.arcs[a].head)] -= flow[a];
  }
  std::uniform_int_distribution<int> cost(1, cost_bound);
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) spec.costs.push_back(cost(rng));
  return spec;
}

// Assignment polytope: x_ij in row-major order, n row-sum constraints then n
// column-sum constraints, the last (redundant) one dropped. Costs drawn from
// [1, cost_bound] when `costs` is empty.
inline StandardFormLP gen_assignment(int n, std::vector<std::vector<double>> costs = {}, std::uint64_t seed = 0,
                                     int cost_bound = 10) {
  require(n >= 1, ErrorCode::kInvalidArgument, "assignment size must be at least 1");
  if (costs.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(1, cost_bound);
    costs.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : costs) {
      for (double& v : row) v = dist(rng);
    }
  }
  require(static_cast<int>(costs.size()) == n, ErrorCode::kInvalidArgument, "cost matrix must be n x n");
  for (const auto& row : costs) {
    require(static_cast<int>(row.size()) == n, ErrorCode::kInvalidArgument, "cost matrix must be n x n");
    for (double v : row) require(is_integral_value(v), ErrorCode::kInvalidArgument, "costs must be integers");
  }
  const int rows = 2 * n - 1;
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int var = i * n + j;
      entries.push_back({i, var, 1.0});
      if (n + j < rows) entries.push_back({n + j, var, 1.0});
    }
  }
  Eigen::VectorXd b = Eigen::VectorXd::Ones(rows);
  Eigen::VectorXd c(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c[i * n + j] = costs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return StandardFormLP(SparseMatrix::from_triplets(rows, n * n, std::move(entries)), std::move(b), std::move(c));
}

enum class TuClosure {
  kAppendUnitColumn,            // [A e_i]
  kTranspose,                   // A^T
  kBlockDiagonalWithTranspose,  // [A 0; 0 A^T]
};

inline SparseMatrix tu_closure_build(const SparseMatrix& a, TuClosure variant, int unit_index = 0) {
  require(a.is_exact_integer(), ErrorCode::kInvalidArgument, "closure constructions need an integer matrix");
  switch (variant) {
    case TuClosure::kAppendUnitColumn: {
      require(unit_index >= 0 && unit_index < a.rows(), ErrorCode::kInvalidArgument, "unit column index out of range");
      std::vector<Triplet> entries = a.triplets();
      entries.push_back({unit_index, a.cols(), 1.0});
      return SparseMatrix::from_triplets(a.rows(), a.cols() + 1, std::move(entries));
    }
    case TuClosure::kTranspose:
      return a.transpose();
    case TuClosure::kBlockDiagonalWithTranspose: {
      std::vector<Triplet> entries = a.triplets();
      for (const Triplet& t : a.triplets()) entries.push_back({a.rows() + t.col, a.cols() + t.row, t.value});
      return SparseMatrix::from_triplets(a.rows() + a.cols(), a.cols() + a.rows(), std::move(entries));
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown closure variant");
}

struct TuInverseReport {
  exact::RationalMatrix inverse;
  double max_abs_entry = 0.0;
  double spectral_norm = 0.0;
  bool entries_unimodular = false;  // every entry in {-1, 0, 1}
  bool norm_within_size = false;    // ||A^{-1}||_2 <= n
};

inline TuInverseReport tu_inverse_check(const SparseMatrix& a) {
  require(a.rows() == a.cols(), ErrorCode::kDimensionMismatch, "inverse check needs a square matrix");
  require(a.is_exact_integer(), ErrorCode::kInvalidArgument, "inverse check needs an integer matrix");
  auto inv = exact::inverse(a.to_rational());
  require(inv.has_value(), ErrorCode::kSingular, "matrix is singular");
  TuInverseReport report;
  report.inverse = std::move(*inv);
  report.entries_unimodular = true;
  for (int i = 0; i < report.inverse.rows(); ++i) {
    for (int j = 0; j < report.inverse.cols(); ++j) {
      const exact::Rational& e = report.inverse(i, j);
      report.max_abs_entry = std::max(report.max_abs_entry, std::abs(exact::to_double(e)));
      if (!(e == 0 || e == 1 || e == -1)) report.entries_unimodular = false;
    }
  }
  const Eigen::MatrixXd dense = report.inverse.to_eigen();
  report.spectral_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues()(0);
  report.norm_within_size = report.spectral_norm <= static_cast<double>(a.rows()) * (1.0 + 1e-12);
  return report;
}

}  // namespace rpdhg::tu
