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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/certify/bounds.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/sparse_matrix.hpp"
#include "rpdhg/tu_toolkit.hpp"

namespace rpdhg::certify {

struct RankOneBoundCheck {
  double measured = 0.0;  // ||[v^T; V]^{-1}||_2
  double bound = 0.0;
  bool holds = false;
};

// v = numerators / denominator; V is n x (n + 1) and must certify as TU.
inline RankOneBoundCheck sherman_morrison_bound_check(const std::vector<std::int64_t>& numerators,
                                                      std::int64_t denominator, const SparseMatrix& v_matrix) {
  const int n = v_matrix.rows();
  require(denominator >= 1, ErrorCode::kInvalidArgument, "denominator M must be a positive integer");
  require(static_cast<int>(numerators.size()) == n + 1 && v_matrix.cols() == n + 1, ErrorCode::kDimensionMismatch,
          "expected v of length n + 1 and V of shape n x (n + 1)");
  require(tu::is_totally_unimodular(v_matrix).verdict, ErrorCode::kInvalidArgument, "V is not totally unimodular");

  exact::RationalMatrix stack(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    stack(0, j) = exact::Rational(exact::Integer(numerators[static_cast<std::size_t>(j)]), exact::Integer(denominator));
  }
  for (const Triplet& t : v_matrix.triplets()) stack(1 + t.row, t.col) = exact::from_double(t.value);
  require(exact::determinant(stack) != 0, ErrorCode::kSingular, "stacked matrix [v^T; V] is singular");

  const Eigen::MatrixXd dense = stack.to_eigen();
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues();
  RankOneBoundCheck out;
  out.measured = 1.0 / sv(sv.size() - 1);
  out.bound = rank_one_inverse_bound(n, static_cast<double>(denominator), dense.row(0).norm());
  out.holds = out.measured <= out.bound * (1.0 + 1e-12);
  return out;
}

struct SchurLimitCheck {
  std::vector<double> lambdas;
  std::vector<double> deviations;  // ||M_lambda^{-1} - blockdiag(M11^{-1}, 0)||_2
  std::vector<double> ratios;      // consecutive deviation ratios
  double max_deviation = 0.0;
  double slope = 0.0;              // least-squares slope of log dev vs log lambda
  bool decays = false;             // every consecutive-decade ratio in [0.05, 0.2]
};

inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

// M_lambda = [M11 M12; 0 lambda M22] has inverse
// [M11^{-1}, -M11^{-1} M12 M22^{-1} / lambda; 0, M22^{-1} / lambda], so the
// deviation from blockdiag(M11^{-1}, 0) decays like 1 / lambda.
inline SchurLimitCheck schur_limit_check(const Eigen::MatrixXd& m11, const Eigen::MatrixXd& m12,
                                         const Eigen::MatrixXd& m22, const std::vector<double>& lambdas) {
  require(m11.rows() == m11.cols() && m22.rows() == m22.cols(), ErrorCode::kDimensionMismatch,
          "M11 and M22 must be square");
  require(m12.rows() == m11.rows() && m12.cols() == m22.cols(), ErrorCode::kDimensionMismatch,
          "M12 must be rows(M11) x cols(M22)");
  require(!lambdas.empty(), ErrorCode::kInvalidArgument, "need at least one lambda");
  const Eigen::Index p = m11.rows();
  const Eigen::Index q = m22.rows();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu11(m11);
  require(lu11.isInvertible(), ErrorCode::kSingular, "M_lambda is singular (M11 singular)");
  Eigen::MatrixXd limit = Eigen::MatrixXd::Zero(p + q, p + q);
  limit.topLeftCorner(p, p) = lu11.inverse();

  SchurLimitCheck out;
  out.lambdas = lambdas;
  for (double lambda : lambdas) {
    require(lambda > 0.0, ErrorCode::kInvalidArgument, "lambda must be positive");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p + q, p + q);
    m.topLeftCorner(p, p) = m11;
    m.topRightCorner(p, q) = m12;
    m.bottomRightCorner(q, q) = lambda * m22;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    require(lu.isInvertible(), ErrorCode::kSingular, "M_lambda is singular");
    const double dev = spectral_norm(lu.inverse() - limit);
    out.deviations.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.decays = true;
  for (std::size_t k = 1; k < out.deviations.size(); ++k) {
    const double ratio = out.deviations[k] / out.deviations[k - 1];
    out.ratios.push_back(ratio);
    const double decades = std::log10(lambdas[k] / lambdas[k - 1]);
    if (std::abs(decades - 1.0) < 1e-9 && !(ratio >= 0.05 && ratio <= 0.2)) out.decays = false;
  }
  if (lambdas.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      mx += std::log(lambdas[k]);
      my += std::log(out.deviations[k]);
    }
    mx /= static_cast<double>(lambdas.size());
    my /= static_cast<double>(lambdas.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      const double dx = std::log(lambdas[k]) - mx;
      sxy += dx * (std::log(out.deviations[k]) - my);
      sxx += dx * dx;
    }
    out.slope = sxy / sxx;
  }
  return out;
}

}  // namespace rpdhg::certify
