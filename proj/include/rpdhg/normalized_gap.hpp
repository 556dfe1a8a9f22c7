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

// Normalized duality gap
//
//   rho_r(z) = max { L(x, y^) - L(x^, y) : z^ in Z, ||z^ - z|| <= r } / r
//
// For the LP Lagrangian the objective is affine in z^ with gradient
// g = (A^T y - c, b - A x) and vanishes at z^ = z, so the maximization is a
// linear objective over a ball intersected with the shifted orthant. Its
// maximizer lies on the path z^(lambda) = (max(x + lambda g_x, 0),
// y + lambda g_y), which we search by bracketing and bisection on lambda.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "rpdhg/errors.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/sparse_matrix.hpp"

namespace rpdhg {

struct GapGradient {
  Eigen::VectorXd g_x;  // A^T y - c
  Eigen::VectorXd g_y;  // b - A x

  double dot(const PrimalDualPoint& d) const { return g_x.dot(d.x) + g_y.dot(d.y); }
};

template <LinearOperator Op>
GapGradient gap_gradient(const StandardFormLP& lp, const PrimalDualPoint& z, Op& op) {
  lp.check_point(z);
  return {op.multiply_transpose(z.y) - lp.c(), lp.b() - op.multiply(z.x)};
}

inline GapGradient gap_gradient(const StandardFormLP& lp, const PrimalDualPoint& z) {
  lp.check_point(z);
  return {lp.A().multiply_transpose(z.y) - lp.c(), lp.b() - lp.A().multiply(z.x)};
}

// L(z) = c^T x + y^T (b - A x), reusing the gradient's product.
inline double lagrangian_from_gradient(const StandardFormLP& lp, const PrimalDualPoint& z, const GapGradient& g) {
  return lp.c().dot(z.x) + z.y.dot(g.g_y);
}

// KKT residual reusing the products already inside the gradient.
inline KktResidual kkt_residual_from_gradient(const StandardFormLP& lp, const PrimalDualPoint& z,
                                              const GapGradient& g, double radius) {
  return kkt_residual_from_products(lp, z, lp.b() - g.g_y, g.g_x + lp.c(), radius);
}

// Gradient projected onto the tangent cone of Z at z: components on the
// active bound x_i = 0 may only point inward.
inline GapGradient tangent_projection(const PrimalDualPoint& z, const GapGradient& g) {
  GapGradient out = g;
  for (Eigen::Index i = 0; i < z.x.size(); ++i) {
    if (z.x[i] <= 0.0) out.g_x[i] = std::max(out.g_x[i], 0.0);
  }
  return out;
}

struct BallMaximizer {
  PrimalDualPoint point;
  double value = 0.0;
  double lambda = 0.0;
};

namespace internal {

inline PrimalDualPoint ascent_point(const PrimalDualPoint& z, const GapGradient& g, double lambda) {
  return {(z.x + lambda * g.g_x).cwiseMax(0.0), z.y + lambda * g.g_y};
}

inline double ascent_radius(const PrimalDualPoint& z, const GapGradient& g, double lambda) {
  return ((z.x + lambda * g.g_x).cwiseMax(0.0) - z.x).squaredNorm() + lambda * lambda * g.g_y.squaredNorm();
}

}  // namespace internal

// Maximizes g . (z^ - z) over z^ in Z with ||z^ - z|| <= r.
inline BallMaximizer max_over_ball(const PrimalDualPoint& z, const GapGradient& g, double r) {
  require(r > 0.0, ErrorCode::kInvalidArgument, "ball radius must be positive");
  require(z.in_feasible_set(), ErrorCode::kInvalidArgument, "z must satisfy x >= 0");
  require(g.g_x.size() == z.x.size() && g.g_y.size() == z.y.size(), ErrorCode::kDimensionMismatch,
          "gradient and point dimensions differ");

  const GapGradient projected = tangent_projection(z, g);
  const double projected_norm = std::sqrt(projected.g_x.squaredNorm() + projected.g_y.squaredNorm());
  if (projected_norm == 0.0) return {z, 0.0, 0.0};

  const auto finish = [&](double lambda) {
    BallMaximizer out;
    out.lambda = lambda;
    out.point = internal::ascent_point(z, g, lambda);
    out.value = g.dot(out.point - z);
    return out;
  };

  // With no ascent direction that stays unbounded (g_y = 0 and g_x <= 0) the
  // path saturates at x^_i = 0 for every g_x,i < 0.
  const bool unbounded_path = g.g_y.squaredNorm() > 0.0 || g.g_x.maxCoeff() > 0.0;
  if (!unbounded_path) {
    double limit_sq = 0.0;
    double limit_lambda = 0.0;
    for (Eigen::Index i = 0; i < z.x.size(); ++i) {
      if (g.g_x[i] < 0.0) {
        limit_sq += z.x[i] * z.x[i];
        limit_lambda = std::max(limit_lambda, z.x[i] / -g.g_x[i]);
      }
    }
    if (limit_sq <= r * r) return finish(limit_lambda);
  }

  const double r_sq = r * r;
  double lo = 0.0;
  double hi = r / projected_norm;
  // ascent_radius(r / ||g^||) <= r, with equality when nothing gets clipped.
  if (internal::ascent_radius(z, g, hi) >= r_sq) return finish(hi);
  while (internal::ascent_radius(z, g, hi) < r_sq) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (internal::ascent_radius(z, g, mid) <= r_sq) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return finish(lo);
}

namespace internal {

inline double flush_gap(double value, double lagrangian_value) {
  return value < 1e-14 * (1.0 + std::abs(lagrangian_value)) ? 0.0 : value;
}

}  // namespace internal

// rho_r(z) from a precomputed gradient.
inline double rho(const StandardFormLP& lp, const PrimalDualPoint& z, const GapGradient& g, double r) {
  require(z.in_feasible_set(), ErrorCode::kInvalidArgument, "normalized gap is defined for z in Z (x >= 0)");
  const BallMaximizer best = max_over_ball(z, g, r);
  return internal::flush_gap(best.value / r, lagrangian_from_gradient(lp, z, g));
}

inline double rho(const StandardFormLP& lp, const PrimalDualPoint& z, double r) {
  lp.check_point(z);
  return rho(lp, z, gap_gradient(lp, z), r);
}

// lim_{r -> 0+} rho_r(z): the norm of the tangent-cone projected gradient.
inline double rho_zero(const StandardFormLP& lp, const PrimalDualPoint& z, const GapGradient& g) {
  require(z.in_feasible_set(), ErrorCode::kInvalidArgument, "normalized gap is defined for z in Z (x >= 0)");
  const GapGradient projected = tangent_projection(z, g);
  const double value = std::sqrt(projected.g_x.squaredNorm() + projected.g_y.squaredNorm());
  return internal::flush_gap(value, lagrangian_from_gradient(lp, z, g));
}

inline double rho_zero(const StandardFormLP& lp, const PrimalDualPoint& z) {
  lp.check_point(z);
  return rho_zero(lp, z, gap_gradient(lp, z));
}

}  // namespace rpdhg
