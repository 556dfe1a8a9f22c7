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

#include <gtest/gtest.h>

#include "support.hpp"

namespace rpdhg {
namespace {

using testing::lp1;
using testing::point;

Eigen::MatrixXd mat(int rows, int cols, std::initializer_list<double> values) {
  Eigen::MatrixXd m(rows, cols);
  auto it = values.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

TEST(SolveExact, KnownValues) {
  const auto f = certify::solve_exact(lp1());
  EXPECT_EQ(f.optimal_value, 1);
  EXPECT_EQ(f.x_exact, (std::vector<exact::Rational>{1, 0}));
  EXPECT_EQ(f.y_exact, (std::vector<exact::Rational>{1}));

  const auto t = certify::solve_exact(testing::triangle());
  EXPECT_EQ(t.optimal_value, 1);
  EXPECT_EQ(t.x_exact, (std::vector<exact::Rational>{0, 0, 1}));

  const StandardFormLP infeasible(SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}),
                                  Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Ones(2));
  try {
    certify::solve_exact(infeasible);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
  }
  const StandardFormLP unbounded(SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, -1.0}}),
                                 Eigen::VectorXd::Ones(1), (Eigen::VectorXd(2) << 0.0, -1.0).finished());
  try {
    certify::solve_exact(unbounded);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnbounded);
  }
}

TEST(SolveExact, RepresentativeSatisfiesFaceExactly) {
  std::mt19937_64 rng(79);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const StandardFormLP lp = testing::random_integer_lp(3, 5, rng);
    try {
      const auto f = certify::solve_exact(lp);
      EXPECT_TRUE(certify::face_contains_exact(lp, f.optimal_value, f.x_exact, f.y_exact));
      ++solved;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kInfeasible || e.code() == ErrorCode::kUnbounded);
    }
  }
  EXPECT_GE(solved, 5);
  // Instances with an optimum by construction must all solve.
  for (int trial = 0; trial < 20; ++trial) {
    const StandardFormLP lp = testing::random_solvable_lp(3, 5, rng);
    const auto f = certify::solve_exact(lp);
    EXPECT_TRUE(certify::face_contains_exact(lp, f.optimal_value, f.x_exact, f.y_exact));
  }
}

TEST(SolveExact, Guard) {
  const StandardFormLP big(SparseMatrix::identity(11), Eigen::VectorXd::Ones(11), Eigen::VectorXd::Ones(11));
  try {
    certify::solve_exact(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGuardExceeded);
  }
}

TEST(DistanceToOptimal, KnownValues) {
  const auto f = certify::solve_exact(lp1());
  EXPECT_EQ(certify::distance_to_optimal(lp1(), f, point({1, 0}, {1})), 0.0);
  EXPECT_NEAR(certify::distance_to_optimal(lp1(), f, point({0, 0}, {1})), 1.0, 1e-12);
  EXPECT_NEAR(certify::distance_to_optimal(lp1(), f, point({1, 0}, {0})), 1.0, 1e-12);
}

TEST(DistanceToOptimal, NonuniqueFaceMatchesGeometry) {
  // Two parallel shortest routes: X* is the segment between (1,1,0,0) and (0,0,1,1).
  tu::FlowInstanceSpec spec;
  spec.num_nodes = 4;
  spec.arcs = {{0, 1}, {1, 3}, {0, 2}, {2, 3}};
  spec.supplies = {1, 0, 0, -1};
  spec.costs = {1, 1, 1, 1};
  const StandardFormLP lp = tu::gen_min_cost_flow(spec);
  const auto f = certify::solve_exact(lp);
  const certify::OptimalSetDistance dist(lp, f);
  const Eigen::Vector4d p(1, 1, 0, 0), q(0, 0, 1, 1);
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Vector4d x(unit(rng), unit(rng), unit(rng), unit(rng));
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100000; ++k) best = std::min(best, (x - (p + (q - p) * (k / 100000.0))).norm());
    const PrimalDualPoint z{x, dist.project(PrimalDualPoint{x, Eigen::VectorXd::Zero(3)}).y};
    EXPECT_NEAR(dist(z), best, 1e-6);
  }
}

TEST(Projection, EmptyPolyhedronIsReported) {
  certify::Polyhedron p;
  p.eq = mat(1, 2, {1, 1});
  p.eq_rhs = Eigen::VectorXd::Constant(1, -1.0);
  p.ineq = -Eigen::MatrixXd::Identity(2, 2);
  p.ineq_rhs = Eigen::VectorXd::Zero(2);
  EXPECT_FALSE(certify::project_onto_polyhedron(p, Eigen::VectorXd::Zero(2)).has_value());
}

TEST(Projection, MatchesGridOnTriangle) {
  // {u >= 0, u1 + u2 <= 1}.
  certify::Polyhedron p;
  p.eq = Eigen::MatrixXd(0, 2);
  p.eq_rhs = Eigen::VectorXd(0);
  p.ineq = mat(3, 2, {-1, 0, 0, -1, 1, 1});
  p.ineq_rhs = Eigen::Vector3d(0, 0, 1);
  std::mt19937_64 rng(89);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector2d u(normal(rng), normal(rng));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
      for (int j = 0; i + j <= 1000; ++j) best = std::min(best, (u - Eigen::Vector2d(i / 1000.0, j / 1000.0)).norm());
    }
    EXPECT_NEAR(certify::project_onto_polyhedron(p, u)->distance, best, 1e-3);
  }
}

TEST(HoffmanAlpha, KnownValues) {
  certify::HoffmanSystem one;
  one.D = Eigen::MatrixXd(0, 1);
  one.d = Eigen::VectorXd(0);
  one.F = mat(1, 1, {1});
  one.f = Eigen::VectorXd::Ones(1);
  one.sign_set = {0};
  EXPECT_DOUBLE_EQ(certify::hoffman_alpha(one).alpha, 1.0);
  const auto check = certify::hoffman_inequality_check(one, 1.0, {Eigen::VectorXd::Constant(1, 3.0)});
  EXPECT_NEAR(check.worst_ratio, 1.0, 1e-12);
  EXPECT_EQ(certify::hoffman_inequality_check(one, 1.0, {Eigen::VectorXd::Ones(1)}).worst_ratio, 0.0);

  certify::HoffmanSystem id;
  id.D = Eigen::MatrixXd(0, 2);
  id.d = Eigen::VectorXd(0);
  id.F = Eigen::MatrixXd::Identity(2, 2);
  id.f = Eigen::VectorXd::Zero(2);
  EXPECT_DOUBLE_EQ(certify::hoffman_alpha(id).alpha, 1.0);

  certify::HoffmanSystem zero = id;
  zero.F.setZero();
  EXPECT_THROW(certify::hoffman_alpha(zero), Error);
}

TEST(HoffmanAlpha, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    certify::HoffmanSystem s;
    s.D = Eigen::MatrixXd(1, 4);
    s.F = Eigen::MatrixXd(2, 4);
    for (int j = 0; j < 4; ++j) {
      s.D(0, j) = entry(rng);
      s.F(0, j) = entry(rng);
      s.F(1, j) = entry(rng);
    }
    s.d = Eigen::VectorXd::Zero(1);
    s.f = Eigen::VectorXd::Zero(2);
    if (s.stacked().isZero()) continue;
    EXPECT_NEAR(certify::hoffman_alpha(s).alpha, testing::dense_hoffman_alpha(s.stacked()), 1e-9);
  }
}

TEST(HoffmanAlpha, InvariantUnderRowPermutationAndNegation) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    certify::HoffmanSystem s;
    s.D = Eigen::MatrixXd(0, 3);
    s.d = Eigen::VectorXd(0);
    s.F = Eigen::MatrixXd(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) s.F(i, j) = entry(rng);
    }
    s.f = Eigen::VectorXd::Zero(3);
    if (s.F.isZero()) continue;
    certify::HoffmanSystem t = s;
    t.F.row(0).swap(t.F.row(2));
    t.F.row(1) *= -1.0;
    EXPECT_NEAR(certify::hoffman_alpha(s).alpha, certify::hoffman_alpha(t).alpha, 1e-12);
  }
}

TEST(HoffmanInequality, RandomSystemHasNoViolations) {
  certify::HoffmanSystem s;
  s.D = mat(1, 3, {1, 2, -1});
  s.d = Eigen::VectorXd::Constant(1, 2.0);
  s.F = mat(1, 3, {1, -1, 1});
  s.f = Eigen::VectorXd::Constant(1, 1.0);
  s.sign_set = {0, 2};
  const double alpha = certify::hoffman_alpha(s).alpha;
  const auto check = certify::hoffman_inequality_check(s, alpha, certify::sample_sign_constrained(s, 200, 3.0, 5));
  EXPECT_EQ(check.violations, 0);
  EXPECT_EQ(check.samples, 200);
  EXPECT_LE(check.worst_ratio, 1.0 + 1e-9);
}

TEST(Sharpness, Lp1Report) {
  const auto r = certify::sharpness_alpha(lp1());
  EXPECT_EQ(r.radius, 16);
  EXPECT_GT(r.alpha, 0.0);
  EXPECT_DOUBLE_EQ(r.gap_sharpness, r.alpha / 2.0);
  EXPECT_TRUE(r.rank_one_bound_applicable);
  EXPECT_GT(r.rank_one_checked, 0);
  EXPECT_EQ(r.rank_one_violations, 0);
  EXPECT_GE(r.alpha, r.theoretical_alpha_lower);
  // alpha is the reciprocal of the largest inverse norm, attained at the witness.
  const Eigen::MatrixXd k = certify::kkt_stacked_matrix(lp1(), 16).to_eigen();
  EXPECT_NEAR(r.alpha, testing::dense_hoffman_alpha(k), 1e-12);
  Eigen::MatrixXd g(r.witness.rows.size(), r.witness.cols.size());
  for (std::size_t i = 0; i < r.witness.rows.size(); ++i) {
    for (std::size_t j = 0; j < r.witness.cols.size(); ++j) g(i, j) = k(r.witness.rows[i], r.witness.cols[j]);
  }
  EXPECT_NEAR(1.0 / r.alpha, testing::svd_norm(g.inverse()), 1e-9);
}

TEST(Sharpness, DegenerateZeroObjectiveRow) {
  const StandardFormLP lp(tu::incidence_matrix(3, testing::triangle_spec().arcs).submatrix({0, 1}, {0, 1, 2}),
                          Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3));
  const auto r = certify::sharpness_alpha(lp);
  EXPECT_EQ(r.radius, 1);
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(5, 5);
  blocks.topLeftCorner(2, 3) = lp.A().to_dense();
  blocks.bottomRightCorner(3, 2) = lp.A().to_dense().transpose();
  EXPECT_NEAR(r.alpha, testing::dense_hoffman_alpha(blocks), 1e-12);
  EXPECT_FALSE(std::find(r.witness.rows.begin(), r.witness.rows.end(), 0) != r.witness.rows.end());
}

TEST(Sharpness, TriangleAboveExplicitLowerValue) {
  const auto r = certify::sharpness_alpha(testing::triangle());
  EXPECT_GE(r.alpha, r.theoretical_alpha_lower);
  EXPECT_EQ(r.rank_one_violations, 0);
  EXPECT_NEAR(r.theoretical_alpha_lower, certify::explicit_alpha_lower(2, 1.0, static_cast<double>(r.radius)), 0.0);
}

TEST(Sharpness, GuardExceeded) {
  const StandardFormLP lp = tu::gen_min_cost_flow(tu::random_flow_spec(4, 5, 5, 0));
  try {
    certify::sharpness_alpha(lp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGuardExceeded);
  }
}

TEST(Sharpness, DefinitionHoldsOnSamples) {
  for (const StandardFormLP& lp : {lp1(), testing::triangle(), tu::gen_assignment(2, {{3, 1}, {2, 5}})}) {
    const auto face = certify::solve_exact(lp);
    const certify::OptimalSetDistance dist(lp, face);
    const auto r = certify::sharpness_alpha(lp);
    for (const auto& [z, rad] : testing::certificate_samples(face.representative(), r.radius, 200, 9)) {
      EXPECT_LE(r.alpha * dist(z), rho(lp, z, rad) + 1e-8);
    }
  }
}

TEST(Bounds, RadiusKnownValues) {
  EXPECT_EQ(certify::radius_R(1, 2.0), 16);
  EXPECT_EQ(certify::radius_R(4, 1.0), 64);
  EXPECT_EQ(certify::radius_R(1, 1.0), 8);
  EXPECT_EQ(certify::radius_R(2, 1.0), 23);  // 8 * 2^1.5 = 22.63
  EXPECT_EQ(certify::radius_R(3, 0.0), 1);
}

TEST(Bounds, TstarKnownValues) {
  EXPECT_EQ(certify::theoretical_tstar(1.0, 0.5, 1.0, 0.5), 448);
  const auto half = certify::theoretical_tstar(1.0, 0.5, 1.0, 0.5);
  const auto near_one = certify::theoretical_tstar(1.0, 0.5, 1.0, 1.0 - 1e-12);
  EXPECT_NEAR(static_cast<double>(near_one), half / 2.0, 1.0);
  const auto a = certify::theoretical_tstar(0.3, 0.2, 2.0, 0.4);
  const auto b = certify::theoretical_tstar(0.6, 0.2, 2.0, 0.4);
  EXPECT_LE(std::abs(static_cast<double>(a) / 2.0 - static_cast<double>(b)), 1.0);
  EXPECT_THROW(certify::theoretical_tstar(1.0, 1.0, 1.0, 0.5), Error);
  EXPECT_THROW(certify::theoretical_tstar(0.0, 0.5, 1.0, 0.5), Error);
  EXPECT_THROW(certify::theoretical_tstar(1.0, 0.5, 1.0, 1.0), Error);
}

TEST(Bounds, ContainmentFactor) {
  EXPECT_NEAR(certify::containment_factor(0.25, 2.0), 2.0 * std::sqrt(3.0), 1e-15);
}

TEST(RankOneBound, KnownValues) {
  const auto id = certify::sherman_morrison_bound_check({1, 0}, 1, SparseMatrix::from_triplets(1, 2, {{0, 1, 1.0}}));
  EXPECT_NEAR(id.measured, 1.0, 1e-12);
  EXPECT_NEAR(id.bound, 2.0 + std::pow(2.0, 1.5) + 2.0, 1e-12);
  EXPECT_TRUE(id.holds);
  const auto half =
      certify::sherman_morrison_bound_check({1, 1}, 2, SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, -1.0}}));
  // [1/2 1/2; 1 -1] has inverse [1 1/2; 1 -1/2].
  EXPECT_NEAR(half.measured, testing::svd_norm(mat(2, 2, {1, 0.5, 1, -0.5})), 1e-12);
  EXPECT_TRUE(half.holds);
  EXPECT_THROW(
      certify::sherman_morrison_bound_check({1, 1}, 1, SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}})),
      Error);
}

TEST(SchurLimit, KnownValues) {
  const auto diag = certify::schur_limit_check(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 1),
                                               Eigen::MatrixXd::Identity(1, 1), {1e1, 1e2, 1e3});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(diag.deviations[k], 1.0 / diag.lambdas[k], 1e-15);
  const auto ex = certify::schur_limit_check(mat(2, 2, {1, 0, 1, 1}), mat(2, 1, {1, 0}), mat(1, 1, {2}),
                                             {1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
  EXPECT_TRUE(ex.decays);
  EXPECT_NEAR(ex.slope, -1.0, 0.01);
  EXPECT_LT(ex.deviations.back(), 1e-5);
  EXPECT_THROW(certify::schur_limit_check(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1),
                                          Eigen::MatrixXd::Identity(1, 1), {10.0}),
               Error);
}

TEST(SchurLimit, DeviationMatchesClosedForm) {
  // The inverse of [M11 M12; 0 l M22] differs from blockdiag(M11^{-1}, 0) by
  // [0, -M11^{-1} M12 M22^{-1} / l; 0, M22^{-1} / l].
  std::mt19937_64 rng(103);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m11 = Eigen::MatrixXd::Identity(3, 3) * 3.0, m12(3, 2), m22 = Eigen::MatrixXd::Identity(2, 2) * 2.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m11(i, j) += normal(rng);
    for (int j = 0; j < 2; ++j) m12(i, j) = normal(rng);
  }
  const auto check = certify::schur_limit_check(m11, m12, m22, {1e2, 1e4});
  for (std::size_t k = 0; k < 2; ++k) {
    const double l = check.lambdas[k];
    Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(5, 5);
    diff.topRightCorner(3, 2) = -m11.inverse() * m12 * m22.inverse() / l;
    diff.bottomRightCorner(2, 2) = m22.inverse() / l;
    EXPECT_NEAR(check.deviations[k], testing::svd_norm(diff), 1e-9 * testing::svd_norm(diff));
  }
}

}  // namespace
}  // namespace rpdhg
