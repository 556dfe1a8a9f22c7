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

// Closed-form constants: the radius R, the restart-length bound t*, the
// containment factor theta, and the rank-one inverse-norm bound.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "rpdhg/errors.hpp"
#include "rpdhg/lp_model.hpp"

namespace rpdhg::certify {

// ceil(8 m1^1.5 H), evaluated exactly when H is an integer; never below 1.
inline std::int64_t radius_R(int num_constraints, double max_data_magnitude) {
  require(num_constraints >= 1, ErrorCode::kInvalidArgument, "radius_R needs m1 >= 1");
  require(max_data_magnitude >= 0.0, ErrorCode::kInvalidArgument, "H must be nonnegative");
  std::int64_t radius = 0;
  if (is_integral_value(max_data_magnitude) && max_data_magnitude < 1e12) {
    // Smallest R >= 0 with R^2 >= 64 H^2 m1^3.
    using boost::multiprecision::cpp_int;
    const cpp_int h(static_cast<std::int64_t>(max_data_magnitude));
    const cpp_int m(num_constraints);
    const cpp_int target = 64 * h * h * m * m * m;
    cpp_int root = boost::multiprecision::sqrt(target);
    if (root * root < target) ++root;
    radius = root.convert_to<std::int64_t>();
  } else {
    radius = static_cast<std::int64_t>(
        std::ceil(8.0 * std::pow(static_cast<double>(num_constraints), 1.5) * max_data_magnitude));
  }
  return std::max<std::int64_t>(radius, 1);
}

inline std::int64_t radius_R(const StandardFormLP& lp) {
  return radius_R(lp.num_constraints(), lp.max_data_magnitude());
}

// theta = 2 sqrt((1 + eta ||A||) / (1 - eta ||A||)).
inline double containment_factor(double eta, double norm_a) {
  const double s = eta * norm_a;
  require(s > 0.0 && s < 1.0, ErrorCode::kInvalidArgument, "need 0 < eta ||A||_2 < 1");
  return 2.0 * std::sqrt((1.0 + s) / (1.0 - s));
}

struct RestartBound {
  double c = 0.0;       // 2 / (eta (1 - eta ||A||))
  double q = 0.0;       // 4 (1 + eta ||A||) / (1 - eta ||A||)
  std::int64_t tstar = 0;
};

// t* = ceil(2 C (q + 2) / (alpha beta)).
inline RestartBound theoretical_tstar_detail(double alpha, double eta, double norm_a, double beta) {
  require(eta > 0.0 && norm_a > 0.0, ErrorCode::kInvalidArgument, "eta and ||A||_2 must be positive");
  const double s = eta * norm_a;
  require(s < 1.0, ErrorCode::kInvalidArgument, "t* needs eta ||A||_2 < 1");
  require(alpha > 0.0, ErrorCode::kInvalidArgument, "t* needs alpha > 0");
  require(beta > 0.0 && beta < 1.0, ErrorCode::kInvalidArgument, "t* needs beta in (0,1)");
  RestartBound out;
  out.c = 2.0 / (eta * (1.0 - s));
  out.q = 4.0 * (1.0 + s) / (1.0 - s);
  const double raw = 2.0 * out.c * (out.q + 2.0) / (alpha * beta);
  require(raw < 9e18, ErrorCode::kInvalidArgument, "t* overflows a 64-bit count");
  out.tstar = static_cast<std::int64_t>(std::ceil(raw));
  return out;
}

inline std::int64_t theoretical_tstar(double alpha, double eta, double norm_a, double beta) {
  return theoretical_tstar_detail(alpha, eta, norm_a, beta).tstar;
}

// Upper bound on ||[v^T; V]^{-1}||_2 for TU V with n rows and v = k / M:
// n + 1 + M ((n + 1)^1.5 ||v||_2 + n + 1).
inline double rank_one_inverse_bound(int n, double multiplier, double v_norm) {
  const double n1 = static_cast<double>(n) + 1.0;
  return n1 + multiplier * (std::pow(n1, 1.5) * v_norm + n1);
}

// The rank-one bound evaluated with n = 2 m1, M = R and the a-priori
// ||v|| <= 2 H sqrt(m1) / R; its reciprocal lower-bounds the Hoffman constant
// of a totally unimodular LP.
inline double explicit_alpha_lower(int num_constraints, double max_data_magnitude, double radius) {
  const double v_norm = 2.0 * max_data_magnitude * std::sqrt(static_cast<double>(num_constraints)) / radius;
  return 1.0 / rank_one_inverse_bound(2 * num_constraints, radius, v_norm);
}

}  // namespace rpdhg::certify
