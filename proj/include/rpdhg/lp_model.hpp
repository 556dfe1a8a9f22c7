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
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "rpdhg/errors.hpp"
#include "rpdhg/exact.hpp"
#include "rpdhg/sparse_matrix.hpp"

namespace rpdhg {

// z = (x, y): primal part x has one entry per column of A, dual part y one
// entry per row.
struct PrimalDualPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  static PrimalDualPoint zeros(int num_constraints, int num_variables) {
    return {Eigen::VectorXd::Zero(num_variables), Eigen::VectorXd::Zero(num_constraints)};
  }

  // Membership in Z = {x >= 0} x R^m1.
  bool in_feasible_set() const { return x.size() == 0 || x.minCoeff() >= 0.0; }

  double squared_norm() const { return x.squaredNorm() + y.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd out(x.size() + y.size());
    out << x, y;
    return out;
  }

  friend PrimalDualPoint operator-(const PrimalDualPoint& a, const PrimalDualPoint& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend PrimalDualPoint operator+(const PrimalDualPoint& a, const PrimalDualPoint& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend PrimalDualPoint operator*(double s, const PrimalDualPoint& a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const PrimalDualPoint& a, const PrimalDualPoint& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double distance(const PrimalDualPoint& a, const PrimalDualPoint& b) { return (a - b).norm(); }

// min c^T x  s.t.  A x = b,  x >= 0.
class StandardFormLP {
 public:
  StandardFormLP() = default;

  StandardFormLP(SparseMatrix a, Eigen::VectorXd b, Eigen::VectorXd c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    require(b_.size() == a_.rows(), ErrorCode::kDimensionMismatch,
            "b has length " + std::to_string(b_.size()) + " but A has " + std::to_string(a_.rows()) + " rows");
    require(c_.size() == a_.cols(), ErrorCode::kDimensionMismatch,
            "c has length " + std::to_string(c_.size()) + " but A has " + std::to_string(a_.cols()) + " columns");
    require(a_.rows() >= 1, ErrorCode::kInvalidArgument, "an LP needs at least one constraint");
    require(a_.cols() >= a_.rows(), ErrorCode::kInvalidArgument,
            "expected at least as many variables as constraints (m2 >= m1)");
    require(b_.allFinite() && c_.allFinite(), ErrorCode::kInvalidArgument, "non-finite b or c");
    max_data_magnitude_ = std::max(b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0, c_.cwiseAbs().maxCoeff());
  }

  const SparseMatrix& A() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& c() const { return c_; }

  // m1 and m2.
  int num_constraints() const { return a_.rows(); }
  int num_variables() const { return a_.cols(); }

  // H = max(|b_i|, |c_j|).
  double max_data_magnitude() const { return max_data_magnitude_; }

  // Integer A, b and c: the data of a totally unimodular LP when A is TU.
  bool has_integer_data() const {
    const auto integral = [](const Eigen::VectorXd& v) {
      return std::all_of(v.begin(), v.end(), [](double e) { return is_integral_value(e); });
    };
    return a_.is_exact_integer() && integral(b_) && integral(c_);
  }

  void check_point(const PrimalDualPoint& z) const {
    require(z.x.size() == num_variables() && z.y.size() == num_constraints(), ErrorCode::kDimensionMismatch,
            "point dimensions (" + std::to_string(z.x.size()) + ", " + std::to_string(z.y.size()) +
                ") do not match the LP (" + std::to_string(num_variables()) + ", " +
                std::to_string(num_constraints()) + ")");
  }

 private:
  SparseMatrix a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd c_;
  double max_data_magnitude_ = 0.0;
};

// L(x, y) = c^T x + b^T y - y^T A x.
inline double lagrangian(const StandardFormLP& lp, const PrimalDualPoint& z) {
  lp.check_point(z);
  return lp.c().dot(z.x) + lp.b().dot(z.y) - z.y.dot(lp.A().multiply(z.x));
}

struct KktResidual {
  double scaled_gap = 0.0;          // (c^T x - b^T y)^+ / R
  Eigen::VectorXd primal_infeas;    // A x - b
  Eigen::VectorXd dual_infeas;      // (A^T y - c)^+
  double norm = 0.0;
};

// Builds the residual from the two products A x and A^T y, which callers
// often already hold.
inline KktResidual kkt_residual_from_products(const StandardFormLP& lp, const PrimalDualPoint& z,
                                              const Eigen::VectorXd& ax, const Eigen::VectorXd& aty, double radius) {
  require(radius > 0.0, ErrorCode::kInvalidArgument, "KKT residual needs a positive radius R");
  KktResidual r;
  r.scaled_gap = std::max(lp.c().dot(z.x) - lp.b().dot(z.y), 0.0) / radius;
  r.primal_infeas = ax - lp.b();
  r.dual_infeas = (aty - lp.c()).cwiseMax(0.0);
  r.norm = std::sqrt(r.scaled_gap * r.scaled_gap + r.primal_infeas.squaredNorm() + r.dual_infeas.squaredNorm());
  return r;
}

inline KktResidual kkt_residual(const StandardFormLP& lp, const PrimalDualPoint& z, double radius) {
  lp.check_point(z);
  require(radius > 0.0, ErrorCode::kInvalidArgument, "KKT residual needs a positive radius R");
  return kkt_residual_from_products(lp, z, lp.A().multiply(z.x), lp.A().multiply_transpose(z.y), radius);
}

struct SpectralNormEstimate {
  double value = 0.0;
  bool zero_matrix = false;
  bool converged = false;
  int iterations = 0;
};

// Power iteration on v -> A^T (A v). The estimate sqrt(||A v||^2) with
// ||v|| = 1 never exceeds ||A||_2. Stops once the relative change of the
// estimate drops below rel_tol / 100. max_iters <= 0 selects 10 (m1 + m2).
inline SpectralNormEstimate spectral_norm_estimate(const SparseMatrix& a, double rel_tol = 1e-8, int max_iters = 0,
                                                   std::uint64_t seed = 0) {
  require(rel_tol > 0.0, ErrorCode::kInvalidArgument, "rel_tol must be positive");
  SpectralNormEstimate out;
  if (a.nnz() == 0) {
    out.zero_matrix = true;
    out.converged = true;
    return out;
  }
  if (max_iters <= 0) max_iters = 10 * (a.rows() + a.cols());

  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    // Explicit mapping keeps the start vector identical across standard libraries.
    v[j] = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  v.normalize();

  double previous = 0.0;
  for (int k = 1; k <= max_iters; ++k) {
    const Eigen::VectorXd av = a.multiply(v);
    const double sigma = av.norm();
    out.value = std::max(out.value, sigma);
    out.iterations = k;
    if (sigma == 0.0) break;
    if (k > 1 && std::abs(sigma - previous) <= 0.01 * rel_tol * sigma) {
      out.converged = true;
      break;
    }
    previous = sigma;
    v = a.multiply_transpose(av);
    const double n = v.norm();
    if (n == 0.0) break;
    v /= n;
  }
  return out;
}

// sqrt(||x||^2 - 2 eta y^T A x + ||y||^2). Positive definite whenever
// eta ||A||_2 < 1; `norm_a` is estimated when not supplied.
inline double weighted_norm(const StandardFormLP& lp, const PrimalDualPoint& z, double eta,
                            std::optional<double> norm_a = std::nullopt) {
  lp.check_point(z);
  require(eta >= 0.0, ErrorCode::kInvalidArgument, "eta must be nonnegative");
  const double op_norm = norm_a ? *norm_a : spectral_norm_estimate(lp.A(), 1e-12, 100000).value;
  require(eta * op_norm < 1.0, ErrorCode::kInvalidArgument,
          "weighted norm requires eta * ||A||_2 < 1 (got " + std::to_string(eta * op_norm) + ")");
  const double form = z.x.squaredNorm() - 2.0 * eta * z.x.dot(lp.A().multiply_transpose(z.y)) + z.y.squaredNorm();
  const double scale = z.squared_norm();
  require(form >= -1e-12 * scale, ErrorCode::kInvalidArgument, "weighted quadratic form is negative");
  return std::sqrt(std::max(form, 0.0));
}

}  // namespace rpdhg
