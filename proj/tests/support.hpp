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

// Instances and independent oracles shared by the test binaries. Nothing here
// calls into the code paths it is used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rpdhg/rpdhg.hpp"

namespace rpdhg::testing {

// min x1 + 2 x2 s.t. x1 + x2 = 1, x >= 0.
inline StandardFormLP lp1() {
  return StandardFormLP(SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}), Eigen::VectorXd::Ones(1),
                        (Eigen::VectorXd(2) << 1.0, 2.0).finished());
}

inline tu::FlowInstanceSpec triangle_spec(bool drop_last_row = true) {
  tu::FlowInstanceSpec spec;
  spec.num_nodes = 3;
  spec.arcs = {{0, 1}, {1, 2}, {0, 2}};
  spec.supplies = {1, 0, -1};
  spec.costs = {1, 1, 1};
  spec.drop_last_row = drop_last_row;
  return spec;
}

inline StandardFormLP triangle(bool drop_last_row = true) { return tu::gen_min_cost_flow(triangle_spec(drop_last_row)); }

inline PrimalDualPoint point(std::vector<double> x, std::vector<double> y) {
  return {Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
          Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))};
}

// Random integer LP; A entries in [-3, 3] with roughly half zeros.
inline StandardFormLP random_integer_lp(int m1, int m2, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> data(-5, 5);
  std::vector<Triplet> t;
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) {
      const int v = entry(rng);
      if (v != 0 && (rng() & 1u)) t.push_back({i, j, static_cast<double>(v)});
    }
    if (std::none_of(t.begin(), t.end(), [&](const Triplet& e) { return e.row == i; })) t.push_back({i, i, 1.0});
  }
  Eigen::VectorXd b(m1), c(m2);
  for (int i = 0; i < m1; ++i) b[i] = data(rng);
  for (int j = 0; j < m2; ++j) c[j] = data(rng);
  return StandardFormLP(SparseMatrix::from_triplets(m1, m2, t), b, c);
}

// Feasible and dual feasible by construction: b = A x0 with x0 >= 0 and
// c = A^T y0 + s with s >= 0, so an optimum always exists.
inline StandardFormLP random_solvable_lp(int m1, int m2, std::mt19937_64& rng) {
  const StandardFormLP shape = random_integer_lp(m1, m2, rng);
  std::uniform_int_distribution<int> small(0, 3);
  std::uniform_int_distribution<int> dual(-2, 2);
  Eigen::VectorXd x0(m2), s(m2), y0(m1);
  for (int j = 0; j < m2; ++j) x0[j] = small(rng), s[j] = small(rng);
  for (int i = 0; i < m1; ++i) y0[i] = dual(rng);
  const Eigen::MatrixXd a = shape.A().to_dense();
  return StandardFormLP(shape.A(), a * x0, a.transpose() * y0 + s);
}

inline PrimalDualPoint random_point(int m1, int m2, std::mt19937_64& rng, double scale = 2.0, double zero_prob = 0.3) {
  std::normal_distribution<double> normal(0.0, scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PrimalDualPoint z{Eigen::VectorXd(m2), Eigen::VectorXd(m1)};
  for (int j = 0; j < m2; ++j) z.x[j] = unit(rng) < zero_prob ? 0.0 : std::abs(normal(rng));
  for (int i = 0; i < m1; ++i) z.y[i] = normal(rng);
  return z;
}

// ---------------------------------------------------------------------------
// Dense re-evaluation oracles.

inline double dense_lagrangian(const StandardFormLP& lp, const PrimalDualPoint& z) {
  const Eigen::MatrixXd a = lp.A().to_dense();
  double v = 0.0;
  for (int j = 0; j < a.cols(); ++j) v += lp.c()[j] * z.x[j];
  for (int i = 0; i < a.rows(); ++i) {
    v += lp.b()[i] * z.y[i];
    for (int j = 0; j < a.cols(); ++j) v -= z.y[i] * a(i, j) * z.x[j];
  }
  return v;
}

inline double dense_kkt_norm(const StandardFormLP& lp, const PrimalDualPoint& z, double radius) {
  const Eigen::MatrixXd a = lp.A().to_dense();
  const double gap = std::max(lp.c().dot(z.x) - lp.b().dot(z.y), 0.0) / radius;
  double sq = gap * gap;
  for (int i = 0; i < a.rows(); ++i) {
    double r = -lp.b()[i];
    for (int j = 0; j < a.cols(); ++j) r += a(i, j) * z.x[j];
    sq += r * r;
  }
  for (int j = 0; j < a.cols(); ++j) {
    double r = -lp.c()[j];
    for (int i = 0; i < a.rows(); ++i) r += a(i, j) * z.y[i];
    sq += std::max(r, 0.0) * std::max(r, 0.0);
  }
  return std::sqrt(sq);
}

inline double svd_norm(const Eigen::MatrixXd& m) { return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues()(0); }

// ---------------------------------------------------------------------------
// Gap maximization oracles: maximize g . (w - z) over w in Z, ||w - z|| <= r.

// Exact: enumerate which x-coordinates end at zero; the rest move along g
// with whatever radius is left. Every candidate is feasible, and the optimum
// has this form, so the maximum over feasible candidates is exact.
inline double gap_value_by_enumeration(const PrimalDualPoint& z, const Eigen::VectorXd& gx, const Eigen::VectorXd& gy,
                                       double r) {
  const int n = static_cast<int>(z.x.size());
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double used = 0.0;
    double value = 0.0;
    double free_sq = gy.squaredNorm();
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1u) {
        used += z.x[j] * z.x[j];
        value -= gx[j] * z.x[j];
      } else {
        free_sq += gx[j] * gx[j];
      }
    }
    if (used > r * r) continue;
    const double left = std::sqrt(r * r - used);
    const double gnorm = std::sqrt(free_sq);
    bool ok = true;
    if (gnorm > 0.0) {
      for (int j = 0; j < n; ++j) {
        if (!(mask >> j & 1u) && z.x[j] + left * gx[j] / gnorm < -1e-15) ok = false;
      }
      value += left * gnorm;
    }
    if (ok) best = std::max(best, value);
  }
  return best;
}

// Sampling: uniform random directions followed by an adaptive local search.
// Each direction d (unit) maps to w = (max(x + r d_x, 0), y + r d_y), which is
// always inside the ball. Returns the best value seen.
inline double gap_value_by_sampling(const PrimalDualPoint& z, const Eigen::VectorXd& gx, const Eigen::VectorXd& gy,
                                    double r, int evaluations, std::uint64_t seed) {
  const Eigen::Index nx = z.x.size();
  const Eigen::Index ny = z.y.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto value_of = [&](Eigen::VectorXd d) {
    d.normalize();
    const Eigen::VectorXd wx = (z.x + r * d.head(nx)).cwiseMax(0.0);
    return gx.dot(wx - z.x) + gy.dot(r * d.tail(ny));
  };
  Eigen::VectorXd best_dir = Eigen::VectorXd::Zero(nx + ny);
  double best = 0.0;
  const int global = evaluations / 5;
  for (int s = 0; s < global; ++s) {
    Eigen::VectorXd d(nx + ny);
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
    const double v = value_of(d);
    if (v > best) {
      best = v;
      best_dir = d.normalized();
    }
  }
  if (best_dir.norm() == 0.0) return best;
  double step = 0.3;
  for (int s = global; s < evaluations; ++s) {
    Eigen::VectorXd d(nx + ny);
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = best_dir[i] + step * normal(rng);
    const double v = value_of(d);
    if (v > best) {
      best = v;
      best_dir = d.normalized();
      step = std::min(step * 1.5, 1.0);
    } else {
      step = std::max(step * 0.98, 1e-9);
    }
  }
  return best;
}

// Every permutation cost of an n x n assignment.
inline double brute_force_assignment(const std::vector<std::vector<double>>& costs) {
  const int n = static_cast<int>(costs.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += costs[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[i])];
    best = std::min(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Cofactor-expansion determinant on small integer matrices.
inline long long cofactor_determinant(const std::vector<std::vector<long long>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  long long det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(row);
    }
    const long long sign = (j % 2 == 0) ? 1 : -1;
    det += sign * m[0][j] * cofactor_determinant(minor);
  }
  return det;
}

// Brute-force TU test by cofactor determinants of every square submatrix.
inline bool brute_force_tu(const Eigen::MatrixXd& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  bool tu = true;
  for_each_square_selection(rows, cols, std::min(rows, cols), [&](const std::vector<int>& r, const std::vector<int>& c) {
    std::vector<std::vector<long long>> sub(r.size(), std::vector<long long>(c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) sub[i][j] = std::llround(a(r[i], c[j]));
    }
    const long long d = cofactor_determinant(sub);
    if (d < -1 || d > 1) tu = false;
    return tu;
  });
  return tu;
}

// Independent Hoffman constant: every square submatrix, nonsingularity by
// a relative singular-value threshold, largest inverse norm via dense SVD.
inline double dense_hoffman_alpha(const Eigen::MatrixXd& m) {
  double worst = 0.0;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  for_each_square_selection(rows, cols, std::min(rows, cols), [&](const std::vector<int>& r, const std::vector<int>& c) {
    Eigen::MatrixXd g(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) g(i, j) = m(r[i], c[j]);
    }
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(g).singularValues();
    if (sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0))) worst = std::max(worst, 1.0 / sv(sv.size() - 1));
    return true;
  });
  return 1.0 / worst;
}

// Points with ||z|| <= radius for sampling-based certificate checks: a share
// spread through the ball, the rest at log-spread offsets around z*.
inline std::vector<std::pair<PrimalDualPoint, double>> certificate_samples(const PrimalDualPoint& z_star, double radius,
                                                                           int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index m2 = z_star.x.size();
  const Eigen::Index m1 = z_star.y.size();
  std::vector<std::pair<PrimalDualPoint, double>> out;
  for (int s = 0; s < count; ++s) {
    PrimalDualPoint d{Eigen::VectorXd(m2), Eigen::VectorXd(m1)};
    for (Eigen::Index j = 0; j < m2; ++j) d.x[j] = normal(rng);
    for (Eigen::Index i = 0; i < m1; ++i) d.y[i] = normal(rng);
    PrimalDualPoint z;
    if (s % 3 == 0) {
      d.x = d.x.cwiseAbs();
      z = (radius * unit(rng) / d.norm()) * d;
    } else {
      const double offset = std::pow(10.0, -5.0 * unit(rng)) * radius / 8.0;
      z = z_star + (offset / d.norm()) * d;
      z.x = z.x.cwiseMax(0.0);
      if (s % 3 == 2) {
        for (Eigen::Index j = 0; j < m2; ++j) {
          if (z_star.x[j] == 0.0) z.x[j] = 0.0;
        }
      }
      if (z.norm() > radius) z = (radius / z.norm()) * z;
    }
    out.emplace_back(std::move(z), radius * std::pow(10.0, -4.0 * unit(rng)));
  }
  return out;
}

}  // namespace rpdhg::testing
