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

// Restarted primal-dual hybrid gradient for
//
//   min_{x >= 0} max_y  c^T x + b^T y - y^T A x.
//
// Each epoch runs plain PDHG from its start point while maintaining the
// running average of the epoch's iterates. Epoch 0 stops after tau0 steps;
// later epochs stop once the normalized gap at the average (measured at the
// radius ||avg - start||) has contracted by beta relative to the gap at the
// epoch start (measured at the radius of the previous restart). The average
// becomes the next start point.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpdhg/certify/bounds.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/normalized_gap.hpp"
#include "rpdhg/sparse_matrix.hpp"

namespace rpdhg {

struct SolverConfig {
  // Step size; 0 selects 1 / (2 ||A||_2).
  double eta = 0.0;
  double beta = std::exp(-1.0);
  std::int64_t tau0 = 1;
  std::int64_t max_epochs = 100000;
  std::int64_t max_total_iters = 1000000;
  double termination_kkt_tol = 1e-9;
  std::int64_t gap_check_stride = 1;
  // Radius R used to scale the gap term of the KKT residual; defaults to
  // certify::radius_R(lp).
  std::optional<double> kkt_radius;
  // ||A||_2 when known; otherwise estimated by power iteration.
  std::optional<double> norm_a;
  bool record_gap_evaluations = true;

  void validate() const {
    require(eta >= 0.0 && std::isfinite(eta), ErrorCode::kInvalidArgument, "step size must be positive");
    require(beta > 0.0 && beta < 1.0, ErrorCode::kInvalidArgument,
            "restart factor must satisfy β ∈ (0,1), got " + std::to_string(beta));
    require(tau0 >= 1, ErrorCode::kInvalidArgument, "tau0 must be at least 1");
    require(max_epochs >= 0 && max_total_iters >= 0, ErrorCode::kInvalidArgument, "negative iteration limits");
    require(termination_kkt_tol >= 0.0, ErrorCode::kInvalidArgument, "termination tolerance must be nonnegative");
    require(gap_check_stride >= 1, ErrorCode::kInvalidArgument, "gap_check_stride must be at least 1");
    require(!kkt_radius || *kkt_radius > 0.0, ErrorCode::kInvalidArgument, "KKT radius must be positive");
    require(!norm_a || *norm_a > 0.0, ErrorCode::kInvalidArgument, "||A||_2 override must be positive");
  }
};

enum class TerminationReason { kOptimal, kKktTolerance, kMaxEpochs, kMaxIterations };

inline const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kOptimal: return "optimal";
    case TerminationReason::kKktTolerance: return "kkt_tolerance";
    case TerminationReason::kMaxEpochs: return "max_epochs";
    case TerminationReason::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

inline constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

// One record per epoch start z^{n,0}. The final record of a run describes the
// point the solver stopped at; it is marked incomplete and, when termination
// happened at the start of the epoch, has tau == 0.
struct EpochRecord {
  std::int64_t epoch = 0;
  std::int64_t tau = 0;                     // inner iterations run in this epoch
  std::int64_t inner_iter_total = 0;        // cumulative iterations at epoch end
  double rho_ref = kNotEvaluated;           // reference gap (epochs >= 1)
  double rho_at_restart = kNotEvaluated;    // gap at the average that triggered the restart
  double start_norm = 0.0;                  // ||z^{n,0}||
  double start_displacement = 0.0;          // ||z^{n,0} - z^{0,0}||
  double kkt_norm = 0.0;                    // KKT residual at z^{n,0}
  std::optional<double> distance_to_optimal;
  bool completed = false;
};

struct GapEvaluation {
  std::int64_t epoch = 0;
  std::int64_t t = 0;
  double radius = 0.0;
  double rho = 0.0;
};

struct ConvergenceLog {
  std::vector<EpochRecord> epochs;
  std::vector<GapEvaluation> gap_evaluations;
  std::int64_t total_iterations = 0;
  std::int64_t total_matvecs = 0;
  std::int64_t gradient_evaluations = 0;  // each costs two products
  TerminationReason termination_reason = TerminationReason::kMaxEpochs;
  PrimalDualPoint start_point;
  PrimalDualPoint final_point;
  double eta = 0.0;
  double norm_a = 0.0;
  double beta = 0.0;
  std::int64_t tau0 = 0;
  double kkt_radius = 0.0;
};

using DistanceOracle = std::function<double(const PrimalDualPoint&)>;

// x+ = max(x - eta (c - A^T y), 0);  y+ = y + eta (b - A (2 x+ - x)).
// The dual update ascends in y, since dL/dy = b - Ax for
// L = c.x + b.y - y.Ax.
template <LinearOperator Op>
PrimalDualPoint pdhg_step(const StandardFormLP& lp, const PrimalDualPoint& z, double eta, Op& op) {
  lp.check_point(z);
  PrimalDualPoint next;
  next.x = (z.x - eta * (lp.c() - op.multiply_transpose(z.y))).cwiseMax(0.0);
  next.y = z.y + eta * (lp.b() - op.multiply(2.0 * next.x - z.x));
  return next;
}

inline PrimalDualPoint pdhg_step(const StandardFormLP& lp, const PrimalDualPoint& z, double eta) {
  CountingOperator op(lp.A());
  return pdhg_step(lp, z, eta, op);
}

// Average of t + 1 points given the average of the first t.
inline PrimalDualPoint running_average(const PrimalDualPoint& prev_avg, const PrimalDualPoint& new_point,
                                       std::int64_t t) {
  require(t >= 0, ErrorCode::kInvalidArgument, "running_average needs t >= 0");
  if (t == 0) return new_point;
  const double w = 1.0 / static_cast<double>(t + 1);
  return {prev_avg.x + w * (new_point.x - prev_avg.x), prev_avg.y + w * (new_point.y - prev_avg.y)};
}

// Resolves the step size and operator norm a run will use.
inline void resolve_step(const StandardFormLP& lp, const SolverConfig& config, double* eta, double* norm_a) {
  *norm_a = config.norm_a ? *config.norm_a : spectral_norm_estimate(lp.A(), 1e-12, 100000).value;
  require(*norm_a > 0.0, ErrorCode::kInvalidArgument, "constraint matrix is zero");
  *eta = config.eta > 0.0 ? config.eta : 0.5 / *norm_a;
  require(*eta * *norm_a < 1.0, ErrorCode::kInvalidArgument,
          "step size must satisfy η‖A‖₂ < 1 (got " + std::to_string(*eta * *norm_a) + ")");
}

inline ConvergenceLog run_restarted(const StandardFormLP& lp, const PrimalDualPoint& z0, const SolverConfig& config,
                                    const DistanceOracle& distance_oracle = nullptr) {
  config.validate();
  lp.check_point(z0);
  require(z0.in_feasible_set(), ErrorCode::kInvalidArgument, "starting point must satisfy x >= 0");

  ConvergenceLog log;
  resolve_step(lp, config, &log.eta, &log.norm_a);
  log.beta = config.beta;
  log.tau0 = config.tau0;
  log.kkt_radius = config.kkt_radius ? *config.kkt_radius : static_cast<double>(certify::radius_R(lp));
  log.start_point = z0;

  CountingOperator op(lp.A());
  const auto evaluate_gradient = [&](const PrimalDualPoint& z) {
    ++log.gradient_evaluations;
    return gap_gradient(lp, z, op);
  };

  PrimalDualPoint start = z0;
  PrimalDualPoint previous_start = z0;
  bool stop = false;
  for (std::int64_t n = 0; !stop; ++n) {
    EpochRecord record;
    record.epoch = n;
    record.start_norm = start.norm();
    record.start_displacement = distance(start, z0);
    record.inner_iter_total = log.total_iterations;
    if (distance_oracle) record.distance_to_optimal = distance_oracle(start);

    const GapGradient start_gradient = evaluate_gradient(start);
    record.kkt_norm = kkt_residual_from_gradient(lp, start, start_gradient, log.kkt_radius).norm;

    if (n >= 1) {
      const double restart_radius = distance(start, previous_start);
      record.rho_ref = restart_radius > 0.0 ? rho(lp, start, start_gradient, restart_radius)
                                            : rho_zero(lp, start, start_gradient);
      if (record.rho_ref == 0.0) {
        log.termination_reason = TerminationReason::kOptimal;
        stop = true;
      } else if (record.kkt_norm <= config.termination_kkt_tol) {
        log.termination_reason = TerminationReason::kKktTolerance;
        stop = true;
      }
    }
    if (!stop && n >= config.max_epochs) {
      log.termination_reason = TerminationReason::kMaxEpochs;
      stop = true;
    }
    if (stop) {
      log.final_point = start;
      log.epochs.push_back(std::move(record));
      break;
    }

    PrimalDualPoint iterate = start;
    PrimalDualPoint average = start;
    std::int64_t t = 0;
    while (true) {
      if (log.total_iterations >= config.max_total_iters) {
        log.termination_reason = TerminationReason::kMaxIterations;
        stop = true;
        break;
      }
      iterate = pdhg_step(lp, iterate, log.eta, op);
      average = running_average(average, iterate, t);
      ++t;
      ++log.total_iterations;
      if (n == 0) {
        if (t >= config.tau0) break;
        continue;
      }
      if (t % config.gap_check_stride != 0) continue;
      const GapGradient g = evaluate_gradient(average);
      const double radius = distance(average, start);
      const double candidate = radius > 0.0 ? rho(lp, average, g, radius) : rho_zero(lp, average, g);
      if (config.record_gap_evaluations) log.gap_evaluations.push_back({n, t, radius, candidate});
      if (candidate <= config.beta * record.rho_ref) {
        record.rho_at_restart = candidate;
        break;
      }
    }
    record.tau = t;
    record.inner_iter_total = log.total_iterations;
    record.completed = !stop;
    log.epochs.push_back(std::move(record));
    if (stop) {
      log.final_point = t > 0 ? average : start;
      break;
    }
    previous_start = start;
    start = average;
  }
  log.total_matvecs = op.count();
  return log;
}

}  // namespace rpdhg
