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

// Hoffman constant for systems that mix inequalities, equalities and sign
// constraints:
//
//   P = {u : u_i >= 0 (i in S), D u <= d, F u = f}
//   alpha dist(u, P) <= || ((D u - d)^+, F u - f) ||   for every u with u_S >= 0
//
// with alpha = 1 / max ||G^{-1}||_2 over the nonsingular square submatrices G
// of [D; F]. The sign constraints do not enter the enumeration.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/certify/projection.hpp"
#include "rpdhg/combinatorics.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"

namespace rpdhg::certify {

inline constexpr int kHoffmanGuard = 8;

struct SubmatrixWitness {
  std::vector<int> rows;
  std::vector<int> cols;
  double inverse_norm = 0.0;  // ||G^{-1}||_2
};

struct NonsingularSubmatrix {
  const std::vector<int>& rows;
  const std::vector<int>& cols;
  const Eigen::MatrixXd& dense;
  double inverse_norm;
};

// Enumerates every square nonsingular submatrix of `m` (nonsingularity decided
// exactly) and calls `visit` with its inverse spectral norm. Returns the
// witness with the largest inverse norm; ties keep the lexicographically
// first selection.
template <typename Visit>
std::optional<SubmatrixWitness> enumerate_nonsingular(const exact::RationalMatrix& m, int guard, Visit&& visit,
                                                      std::int64_t* checked = nullptr) {
  require(m.rows() <= guard && m.cols() <= guard, ErrorCode::kGuardExceeded,
          "submatrix enumeration limited to " + std::to_string(guard) + " rows and columns, got " +
              std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
  const exact::IntegerMatrix scaled = exact::scale_rows_to_integer(m);
  const Eigen::MatrixXd dense = m.to_eigen();
  std::optional<SubmatrixWitness> worst;
  std::int64_t count = 0;
  for_each_square_selection(m.rows(), m.cols(), std::min(m.rows(), m.cols()),
                            [&](const std::vector<int>& rows, const std::vector<int>& cols) {
                              ++count;
                              if (exact::bareiss_determinant(scaled.submatrix(rows, cols)) == 0) return true;
                              Eigen::MatrixXd g(rows.size(), cols.size());
                              for (std::size_t i = 0; i < rows.size(); ++i) {
                                for (std::size_t j = 0; j < cols.size(); ++j) g(i, j) = dense(rows[i], cols[j]);
                              }
                              const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(g).singularValues();
                              const double inv_norm = 1.0 / sv(sv.size() - 1);
                              visit(NonsingularSubmatrix{rows, cols, g, inv_norm});
                              if (!worst || inv_norm > worst->inverse_norm) worst = SubmatrixWitness{rows, cols, inv_norm};
                              return true;
                            });
  if (checked != nullptr) *checked = count;
  return worst;
}

struct HoffmanSystem {
  Eigen::MatrixXd D;       // inequality rows, D u <= d
  Eigen::VectorXd d;
  Eigen::MatrixXd F;       // equality rows, F u = f
  Eigen::VectorXd f;
  std::vector<int> sign_set;  // indices i with u_i >= 0

  int dimension() const { return static_cast<int>(std::max(D.cols(), F.cols())); }

  Eigen::MatrixXd stacked() const {
    Eigen::MatrixXd out(D.rows() + F.rows(), dimension());
    if (D.rows() > 0) out.topRows(D.rows()) = D;
    if (F.rows() > 0) out.bottomRows(F.rows()) = F;
    return out;
  }

  Polyhedron feasible_set() const {
    const int n = dimension();
    Polyhedron p;
    p.eq = F.rows() > 0 ? F : Eigen::MatrixXd(0, n);
    p.eq_rhs = F.rows() > 0 ? f : Eigen::VectorXd(0);
    const Eigen::Index n_ineq = D.rows() + static_cast<Eigen::Index>(sign_set.size());
    p.ineq = Eigen::MatrixXd::Zero(n_ineq, n);
    p.ineq_rhs = Eigen::VectorXd::Zero(n_ineq);
    if (D.rows() > 0) {
      p.ineq.topRows(D.rows()) = D;
      p.ineq_rhs.head(D.rows()) = d;
    }
    for (std::size_t k = 0; k < sign_set.size(); ++k) p.ineq(D.rows() + static_cast<Eigen::Index>(k), sign_set[k]) = -1.0;
    return p;
  }

  // ||((D u - d)^+, F u - f)||_2.
  double residual(const Eigen::VectorXd& u) const {
    double sq = 0.0;
    if (D.rows() > 0) sq += (D * u - d).cwiseMax(0.0).squaredNorm();
    if (F.rows() > 0) sq += (F * u - f).squaredNorm();
    return std::sqrt(sq);
  }

  void validate() const {
    const int n = dimension();
    require(D.rows() == d.size() && F.rows() == f.size(), ErrorCode::kDimensionMismatch,
            "Hoffman system right-hand sides do not match");
    require((D.rows() == 0 || D.cols() == n) && (F.rows() == 0 || F.cols() == n), ErrorCode::kDimensionMismatch,
            "D and F must have the same number of columns");
    for (int i : sign_set) require(i >= 0 && i < n, ErrorCode::kInvalidArgument, "sign index out of range");
  }
};

struct HoffmanConstant {
  double alpha = 0.0;
  SubmatrixWitness witness;
  std::int64_t submatrices_checked = 0;
};

inline HoffmanConstant hoffman_alpha(const HoffmanSystem& system, int guard = kHoffmanGuard) {
  system.validate();
  HoffmanConstant out;
  auto worst = enumerate_nonsingular(exact::from_eigen(system.stacked()), guard, [](const NonsingularSubmatrix&) {},
                                     &out.submatrices_checked);
  require(worst.has_value(), ErrorCode::kSingular, "stacked matrix has no nonsingular submatrix");
  out.witness = *worst;
  out.alpha = 1.0 / worst->inverse_norm;
  return out;
}

struct HoffmanCheck {
  double worst_ratio = 0.0;  // max alpha dist(u, P) / residual(u)
  std::int64_t violations = 0;
  std::int64_t samples = 0;
};

// Evaluates alpha dist(u, P) against the residual at each sample; a sample
// violates the bound when the ratio exceeds 1 + 1e-9.
inline HoffmanCheck hoffman_inequality_check(const HoffmanSystem& system, double alpha,
                                             const std::vector<Eigen::VectorXd>& samples) {
  system.validate();
  const Polyhedron p = system.feasible_set();
  require(project_onto_polyhedron(p, Eigen::VectorXd::Zero(system.dimension())).has_value(), ErrorCode::kInfeasible,
          "polyhedron P is empty");
  HoffmanCheck out;
  for (const Eigen::VectorXd& u : samples) {
    for (int i : system.sign_set) require(u[i] >= 0.0, ErrorCode::kInvalidArgument, "sample violates sign constraints");
    const auto proj = project_onto_polyhedron(p, u);
    const double dist = proj->distance;
    const double residual = system.residual(u);
    double ratio = 0.0;
    if (residual > 0.0) {
      ratio = alpha * dist / residual;
    } else if (dist > 1e-9) {
      ratio = std::numeric_limits<double>::infinity();
    }
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0 + 1e-9) ++out.violations;
    ++out.samples;
  }
  return out;
}

// Draws `count` points of U around the origin (Gaussian, |.| on the sign set).
inline std::vector<Eigen::VectorXd> sample_sign_constrained(const HoffmanSystem& system, int count, double scale,
                                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<Eigen::VectorXd> out;
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd u(system.dimension());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
    for (int i : system.sign_set) u[i] = std::abs(u[i]);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace rpdhg::certify
