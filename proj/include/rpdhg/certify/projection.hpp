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
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/combinatorics.hpp"
#include "rpdhg/errors.hpp"

namespace rpdhg::certify {

// {u : E u = e, G u <= h}.
struct Polyhedron {
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq;
  Eigen::VectorXd ineq_rhs;

  int dimension() const { return static_cast<int>(std::max(eq.cols(), ineq.cols())); }
};

struct Projection {
  Eigen::VectorXd point;
  double distance = 0.0;
};

// Euclidean projection by active-set enumeration: each choice of tight
// inequalities (at most `dimension` of them) defines an affine set; the
// projection onto it is kept when it satisfies every constraint. The true
// projection lies in the relative interior of some face, whose affine hull is
// cut out by the equalities plus at most `dimension` tight rows, so it is
// among the candidates. Returns std::nullopt when no candidate is feasible,
// which certifies the polyhedron is empty.
inline std::optional<Projection> project_onto_polyhedron(const Polyhedron& p, const Eigen::VectorXd& u0,
                                                         double tol = 1e-9) {
  const int n = static_cast<int>(u0.size());
  const int n_eq = static_cast<int>(p.eq.rows());
  const int n_ineq = static_cast<int>(p.ineq.rows());
  require((n_eq == 0 || p.eq.cols() == n) && (n_ineq == 0 || p.ineq.cols() == n), ErrorCode::kDimensionMismatch,
          "polyhedron and point dimensions differ");

  const double scale = 1.0 + std::max({u0.size() ? u0.cwiseAbs().maxCoeff() : 0.0,
                                       n_eq ? p.eq_rhs.cwiseAbs().maxCoeff() : 0.0,
                                       n_ineq ? p.ineq_rhs.cwiseAbs().maxCoeff() : 0.0});
  const double feas_tol = tol * scale;

  std::optional<Projection> best;
  const auto consider = [&](const std::vector<int>& tight) {
    const int rows = n_eq + static_cast<int>(tight.size());
    Eigen::VectorXd candidate = u0;
    if (rows > 0) {
      Eigen::MatrixXd c(rows, n);
      Eigen::VectorXd rhs(rows);
      if (n_eq > 0) {
        c.topRows(n_eq) = p.eq;
        rhs.head(n_eq) = p.eq_rhs;
      }
      for (std::size_t k = 0; k < tight.size(); ++k) {
        c.row(n_eq + static_cast<Eigen::Index>(k)) = p.ineq.row(tight[k]);
        rhs[n_eq + static_cast<Eigen::Index>(k)] = p.ineq_rhs[tight[k]];
      }
      const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c);
      candidate = u0 + cod.solve(rhs - c * u0);
      if ((c * candidate - rhs).cwiseAbs().maxCoeff() > feas_tol) return true;  // inconsistent
    }
    if (n_ineq > 0 && (p.ineq * candidate - p.ineq_rhs).maxCoeff() > feas_tol) return true;
    const double d = (candidate - u0).norm();
    if (!best || d < best->distance) best = Projection{candidate, d};
    return true;
  };

  for (int k = 0; k <= std::min(n, n_ineq); ++k) for_each_combination(n_ineq, k, consider);
  return best;
}

}  // namespace rpdhg::certify
