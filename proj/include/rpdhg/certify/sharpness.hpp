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

// Sharpness of the normalized duality gap on an LP.
//
// The optimal set Z* is the solution set of the KKT system
//
//   [ c^T/R  -b^T/R ] z <= 0,   [ 0  A^T ] z <= c,   [ A  0 ] z = b,   x >= 0,
//
// whose violation is exactly the KKT residual vector. Its Hoffman constant is
// alpha = 1 / max ||G^{-1}||_2 over nonsingular square submatrices G of
//
//   K = [ c^T/R  -b^T/R ;  A  0 ;  0  A^T ].
//
// Since half the residual norm lower-bounds rho_r(z) for ||z||, r <= R, the gap
// is (alpha / 2)-sharp on W_R(0); that value is reported as `gap_sharpness`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/certify/bounds.hpp"
#include "rpdhg/certify/hoffman.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/lp_model.hpp"

namespace rpdhg::certify {

struct SharpnessReport {
  std::int64_t radius = 0;               // R
  double alpha = 0.0;                    // 1 / max ||G^{-1}||_2
  double gap_sharpness = 0.0;            // alpha / 2
  SubmatrixWitness witness;
  double theoretical_alpha_lower = 0.0;  // reciprocal of the explicit rank-one bound chain
  std::int64_t submatrices_checked = 0;
  std::int64_t nonsingular_submatrices = 0;
  // Rank-one bound on every nonsingular G that contains the objective row.
  bool rank_one_bound_applicable = false;  // requires integer b and c
  std::int64_t rank_one_checked = 0;
  std::int64_t rank_one_violations = 0;
  double rank_one_worst_ratio = 0.0;     // max measured / bound
};

// The stacked matrix K in exact arithmetic (the objective row is c/R, -b/R).
inline exact::RationalMatrix kkt_stacked_matrix(const StandardFormLP& lp, std::int64_t radius) {
  const int m1 = lp.num_constraints();
  const int m2 = lp.num_variables();
  const exact::RationalMatrix a = lp.A().to_rational();
  const exact::Rational r{exact::Integer(radius)};
  exact::RationalMatrix k(1 + m1 + m2, m2 + m1);
  for (int j = 0; j < m2; ++j) k(0, j) = exact::from_double(lp.c()[j]) / r;
  for (int i = 0; i < m1; ++i) k(0, m2 + i) = -exact::from_double(lp.b()[i]) / r;
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) {
      k(1 + i, j) = a(i, j);
      k(1 + m1 + j, m2 + i) = a(i, j);
    }
  }
  return k;
}

inline SharpnessReport sharpness_alpha(const StandardFormLP& lp, std::optional<std::int64_t> radius = std::nullopt,
                                       int guard = kHoffmanGuard) {
  SharpnessReport report;
  report.radius = radius ? *radius : radius_R(lp);
  require(report.radius > 0, ErrorCode::kInvalidArgument, "radius must be positive");
  const exact::RationalMatrix k = kkt_stacked_matrix(lp, report.radius);
  report.rank_one_bound_applicable = lp.has_integer_data();
  const double multiplier = static_cast<double>(report.radius);

  auto worst = enumerate_nonsingular(
      k, guard,
      [&](const NonsingularSubmatrix& g) {
        ++report.nonsingular_submatrices;
        if (!report.rank_one_bound_applicable || g.rows.front() != 0) return;
        const double v_norm = g.dense.row(0).norm();
        const int n = static_cast<int>(g.rows.size()) - 1;
        const double bound = rank_one_inverse_bound(n, multiplier, v_norm);
        ++report.rank_one_checked;
        report.rank_one_worst_ratio = std::max(report.rank_one_worst_ratio, g.inverse_norm / bound);
        if (g.inverse_norm > bound * (1.0 + 1e-12)) ++report.rank_one_violations;
      },
      &report.submatrices_checked);
  require(worst.has_value(), ErrorCode::kSingular, "KKT matrix has no nonsingular submatrix");
  report.witness = *worst;
  report.alpha = 1.0 / worst->inverse_norm;
  report.gap_sharpness = 0.5 * report.alpha;
  report.theoretical_alpha_lower =
      explicit_alpha_lower(lp.num_constraints(), lp.max_data_magnitude(), static_cast<double>(report.radius));
  return report;
}

// The KKT system above as a generic Hoffman system (u = (x, y)).
inline HoffmanSystem kkt_hoffman_system(const StandardFormLP& lp, std::int64_t radius) {
  const int m1 = lp.num_constraints();
  const int m2 = lp.num_variables();
  const Eigen::MatrixXd a = lp.A().to_dense();
  const double r = static_cast<double>(radius);
  HoffmanSystem s;
  s.D = Eigen::MatrixXd::Zero(1 + m2, m2 + m1);
  s.D.block(0, 0, 1, m2) = lp.c().transpose() / r;
  s.D.block(0, m2, 1, m1) = -lp.b().transpose() / r;
  s.D.block(1, m2, m2, m1) = a.transpose();
  s.d = Eigen::VectorXd::Zero(1 + m2);
  s.d.tail(m2) = lp.c();
  s.F = Eigen::MatrixXd::Zero(m1, m2 + m1);
  s.F.block(0, 0, m1, m2) = a;
  s.f = lp.b();
  for (int j = 0; j < m2; ++j) s.sign_set.push_back(j);
  return s;
}

}  // namespace rpdhg::certify
