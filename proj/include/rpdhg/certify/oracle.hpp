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

// Exact desk-scale LP oracle. Optimality is decided by enumerating bases in
// rational arithmetic; distances to the optimal face use the active-set
// projection.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/certify/projection.hpp"
#include "rpdhg/combinatorics.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/lp_model.hpp"

namespace rpdhg::certify {

inline constexpr int kOracleMaxConstraints = 10;
inline constexpr int kOracleMaxVariables = 20;

// Z* = X* x Y* with X* = {x >= 0 : A x = b, c^T x = v*} and
// Y* = {y : A^T y <= c, b^T y = v*}.
struct OptimalFace {
  exact::Rational optimal_value;
  std::vector<exact::Rational> x_exact;
  std::vector<exact::Rational> y_exact;
  std::vector<int> basis;  // columns of the representative optimal basis

  double value() const { return exact::to_double(optimal_value); }
  PrimalDualPoint representative() const {
    const std::vector<double> x = exact::to_double(x_exact);
    const std::vector<double> y = exact::to_double(y_exact);
    return {Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
            Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))};
  }
};

namespace internal {

inline std::vector<exact::Rational> exact_vector(const Eigen::VectorXd& v) {
  std::vector<exact::Rational> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (double e : v) out.push_back(exact::from_double(e));
  return out;
}

}  // namespace internal

// Rational check that (x, y) lies in X* x Y* for the given optimal value.
inline bool face_contains_exact(const StandardFormLP& lp, const exact::Rational& optimal_value,
                                const std::vector<exact::Rational>& x, const std::vector<exact::Rational>& y) {
  const exact::RationalMatrix a = lp.A().to_rational();
  const auto b = internal::exact_vector(lp.b());
  const auto c = internal::exact_vector(lp.c());
  exact::Rational primal(0);
  exact::Rational dual(0);
  for (int j = 0; j < a.cols(); ++j) {
    if (x[static_cast<std::size_t>(j)] < 0) return false;
    primal += c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < a.rows(); ++i) {
    exact::Rational row(0);
    for (int j = 0; j < a.cols(); ++j) row += a(i, j) * x[static_cast<std::size_t>(j)];
    if (row != b[static_cast<std::size_t>(i)]) return false;
    dual += b[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  for (int j = 0; j < a.cols(); ++j) {
    exact::Rational col(0);
    for (int i = 0; i < a.rows(); ++i) col += a(i, j) * y[static_cast<std::size_t>(i)];
    if (col > c[static_cast<std::size_t>(j)]) return false;
  }
  return primal == optimal_value && dual == optimal_value;
}

inline OptimalFace solve_exact(const StandardFormLP& lp) {
  const int m1 = lp.num_constraints();
  const int m2 = lp.num_variables();
  require(m1 <= kOracleMaxConstraints && m2 <= kOracleMaxVariables, ErrorCode::kGuardExceeded,
          "exact oracle limited to m1 <= " + std::to_string(kOracleMaxConstraints) + " and m2 <= " +
              std::to_string(kOracleMaxVariables));

  const exact::RationalMatrix a = lp.A().to_rational();
  const auto b = internal::exact_vector(lp.b());
  const auto c = internal::exact_vector(lp.c());

  // Redundant equality rows are removed; an inconsistent system is infeasible.
  const std::vector<int> rows = exact::independent_rows(a);
  const int r = static_cast<int>(rows.size());
  {
    exact::RationalMatrix augmented(m1, m2 + 1);
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) augmented(i, j) = a(i, j);
      augmented(i, m2) = b[static_cast<std::size_t>(i)];
    }
    require(exact::rank(augmented) == r, ErrorCode::kInfeasible, "infeasible: A x = b has no solution");
  }

  struct Basic {
    std::vector<int> cols;
    std::vector<exact::Rational> x_basic;
    exact::RationalMatrix a_basic;
  };
  std::optional<exact::Rational> best_value;
  std::vector<Basic> optimal_bases;
  for_each_combination(m2, r, [&](const std::vector<int>& cols) {
    exact::RationalMatrix ab(r, r);
    std::vector<exact::Rational> rhs(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      rhs[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
      for (int k = 0; k < r; ++k) ab(i, k) = a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(k)]);
    }
    auto xb = exact::solve(ab, rhs);
    if (!xb) return true;
    exact::Rational value(0);
    for (int k = 0; k < r; ++k) {
      if ((*xb)[static_cast<std::size_t>(k)] < 0) return true;
      value += c[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])] * (*xb)[static_cast<std::size_t>(k)];
    }
    if (!best_value || value < *best_value) {
      best_value = value;
      optimal_bases.clear();
    }
    if (value == *best_value) optimal_bases.push_back({cols, std::move(*xb), std::move(ab)});
    return true;
  });
  require(best_value.has_value(), ErrorCode::kInfeasible, "infeasible: no basic feasible solution");

  // A basis achieving the best vertex value is optimal iff its dual is
  // feasible; if none is, the dual is infeasible and the LP unbounded.
  for (const Basic& basic : optimal_bases) {
    exact::RationalMatrix abt(r, r);
    std::vector<exact::Rational> cb(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) abt(i, k) = basic.a_basic(k, i);
      cb[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(basic.cols[static_cast<std::size_t>(i)])];
    }
    auto y_reduced = exact::solve(abt, cb);
    if (!y_reduced) continue;
    std::vector<exact::Rational> y(static_cast<std::size_t>(m1), exact::Rational(0));
    for (int i = 0; i < r; ++i) y[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])] = (*y_reduced)[static_cast<std::size_t>(i)];
    bool dual_feasible = true;
    for (int j = 0; j < m2 && dual_feasible; ++j) {
      exact::Rational col(0);
      for (int i = 0; i < m1; ++i) col += a(i, j) * y[static_cast<std::size_t>(i)];
      dual_feasible = col <= c[static_cast<std::size_t>(j)];
    }
    if (!dual_feasible) continue;

    OptimalFace face;
    face.optimal_value = *best_value;
    face.x_exact.assign(static_cast<std::size_t>(m2), exact::Rational(0));
    for (int k = 0; k < r; ++k) {
      face.x_exact[static_cast<std::size_t>(basic.cols[static_cast<std::size_t>(k)])] = basic.x_basic[static_cast<std::size_t>(k)];
    }
    face.y_exact = std::move(y);
    face.basis = basic.cols;
    require(face_contains_exact(lp, face.optimal_value, face.x_exact, face.y_exact), ErrorCode::kInvalidArgument,
            "internal error: representative pair fails the exact face check");
    return face;
  }
  fail(ErrorCode::kUnbounded, "unbounded: no dual feasible optimal basis");
}

// Precomputed projections onto X* and Y*; reused across many distance
// queries on the same instance.
class OptimalSetDistance {
 public:
  OptimalSetDistance(const StandardFormLP& lp, const OptimalFace& face) {
    const Eigen::MatrixXd a = lp.A().to_dense();
    const int m1 = lp.num_constraints();
    const int m2 = lp.num_variables();
    const double v = face.value();

    primal_.eq.resize(m1 + 1, m2);
    primal_.eq << a, lp.c().transpose();
    primal_.eq_rhs.resize(m1 + 1);
    primal_.eq_rhs << lp.b(), v;
    primal_.ineq = -Eigen::MatrixXd::Identity(m2, m2);
    primal_.ineq_rhs = Eigen::VectorXd::Zero(m2);

    dual_.eq = lp.b().transpose();
    dual_.eq_rhs = Eigen::VectorXd::Constant(1, v);
    dual_.ineq = a.transpose();
    dual_.ineq_rhs = lp.c();
  }

  PrimalDualPoint project(const PrimalDualPoint& z) const {
    auto px = project_onto_polyhedron(primal_, z.x);
    auto py = project_onto_polyhedron(dual_, z.y);
    require(px.has_value() && py.has_value(), ErrorCode::kInfeasible, "optimal face is empty");
    return {px->point, py->point};
  }

  double operator()(const PrimalDualPoint& z) const {
    auto px = project_onto_polyhedron(primal_, z.x);
    auto py = project_onto_polyhedron(dual_, z.y);
    require(px.has_value() && py.has_value(), ErrorCode::kInfeasible, "optimal face is empty");
    return std::hypot(px->distance, py->distance);
  }

  const Polyhedron& primal_face() const { return primal_; }
  const Polyhedron& dual_face() const { return dual_; }

 private:
  Polyhedron primal_;
  Polyhedron dual_;
};

inline double distance_to_optimal(const StandardFormLP& lp, const OptimalFace& face, const PrimalDualPoint& z) {
  lp.check_point(z);
  return OptimalSetDistance(lp, face)(z);
}

}  // namespace rpdhg::certify
