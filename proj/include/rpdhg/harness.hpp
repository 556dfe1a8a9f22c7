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

// Experiment runner behind the command-line tool: load or generate an
// instance, run the restarted solver, evaluate the requested certificate
// checks, and write a convergence table plus a JSON summary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rpdhg/certify.hpp"
#include "rpdhg/errors.hpp"
#include "rpdhg/io.hpp"
#include "rpdhg/lp_model.hpp"
#include "rpdhg/normalized_gap.hpp"
#include "rpdhg/pdhg_solver.hpp"
#include "rpdhg/tu_toolkit.hpp"

namespace rpdhg::harness {

using nlohmann::ordered_json;

enum class Check { kThetaBall, kTstar, kLinearDecay, kSharpness, kHoffman, kLemma5, kSchur, kTu };

inline const std::vector<std::pair<Check, std::string>>& check_names() {
  static const std::vector<std::pair<Check, std::string>> names = {
      {Check::kThetaBall, "theta_ball"}, {Check::kTstar, "tstar"},     {Check::kLinearDecay, "linear_decay"},
      {Check::kSharpness, "sharpness"},  {Check::kHoffman, "hoffman"}, {Check::kLemma5, "lemma5"},
      {Check::kSchur, "schur"},          {Check::kTu, "tu"}};
  return names;
}

inline std::string to_string(Check check) {
  for (const auto& [c, name] : check_names()) {
    if (c == check) return name;
  }
  return "unknown";
}

// Accepts a comma-separated list of check names or "all".
inline std::vector<Check> parse_checks(const std::string& text) {
  std::vector<Check> out;
  if (text.empty() || text == "none") return out;
  if (text == "all") {
    for (const auto& [c, name] : check_names()) out.push_back(c);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool found = false;
    for (const auto& [c, name] : check_names()) {
      if (name == item) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        found = true;
      }
    }
    require(found, ErrorCode::kParse, "unknown check '" + item + "'");
  }
  return out;
}

enum class OutputFormat { kCsv, kJson };

struct ExperimentSpec {
  std::optional<std::string> instance_path;
  // A flow generator file, or one of: triangle, path3, flow:<nodes>:<arcs>,
  // assignment:<n>.
  std::optional<std::string> generator;
  std::uint64_t seed = 0;
  bool solve = true;
  double eta_scale = 0.5;  // eta = eta_scale / ||A||_2
  double beta = std::exp(-1.0);
  std::int64_t tau0 = 1;
  double kkt_tol = 1e-9;
  std::int64_t max_epochs = 100000;
  std::int64_t max_total_iters = 1000000;
  std::vector<Check> checks;
  int samples = 200;
  std::string out_dir;
  OutputFormat format = OutputFormat::kCsv;

  void validate() const {
    require(instance_path.has_value() != generator.has_value(), ErrorCode::kParse,
            "exactly one of --instance or --generator is required");
    require(solve || !checks.empty(), ErrorCode::kParse, "nothing to do: request a solve or at least one check");
    require(eta_scale > 0.0 && eta_scale < 1.0, ErrorCode::kParse, "eta scale must lie in (0,1)");
    require(beta > 0.0 && beta < 1.0, ErrorCode::kParse, "restart factor must satisfy β ∈ (0,1)");
    require(tau0 >= 1, ErrorCode::kParse, "tau0 must be at least 1");
    require(kkt_tol >= 0.0, ErrorCode::kParse, "KKT tolerance must be nonnegative");
    require(samples >= 1, ErrorCode::kParse, "samples must be positive");
    const bool needs_solve = std::any_of(checks.begin(), checks.end(), [](Check c) {
      return c == Check::kThetaBall || c == Check::kTstar || c == Check::kLinearDecay;
    });
    require(solve || !needs_solve, ErrorCode::kParse, "theta_ball, tstar and linear_decay need a solve");
  }
};

inline StandardFormLP generate_instance(const std::string& generator, std::uint64_t seed) {
  if (generator == "triangle") {
    tu::FlowInstanceSpec spec;
    spec.num_nodes = 3;
    spec.arcs = {{0, 1}, {1, 2}, {0, 2}};
    spec.supplies = {1, 0, -1};
    spec.costs = {1, 1, 1};
    return tu::gen_min_cost_flow(spec, seed);
  }
  if (generator == "path3") {
    tu::FlowInstanceSpec spec;
    spec.num_nodes = 3;
    spec.arcs = {{0, 1}, {1, 2}};
    spec.supplies = {1, 0, -1};
    spec.costs = {1, 1};
    return tu::gen_min_cost_flow(spec, seed);
  }
  const auto parse_count = [&](const std::string& s) {
    require(!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit), ErrorCode::kParse,
            "bad generator argument in '" + generator + "'");
    return std::stoi(s);
  };
  if (generator.rfind("flow:", 0) == 0) {
    const auto rest = generator.substr(5);
    const auto colon = rest.find(':');
    require(colon != std::string::npos, ErrorCode::kParse, "expected flow:<nodes>:<arcs>");
    return tu::gen_min_cost_flow(
        tu::random_flow_spec(parse_count(rest.substr(0, colon)), parse_count(rest.substr(colon + 1)), 10, seed), seed);
  }
  if (generator.rfind("assignment:", 0) == 0) {
    return tu::gen_assignment(parse_count(generator.substr(11)), {}, seed);
  }
  std::ifstream in(generator);
  require(in.good(), ErrorCode::kParse, "unknown generator '" + generator + "' (not a builtin or readable file)");
  return tu::gen_min_cost_flow(io::parse_flow_spec(in), seed);
}

// ---------------------------------------------------------------------------
// JSON views.

inline ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

inline ordered_json to_json(const certify::SharpnessReport& r) {
  return ordered_json{{"R", r.radius},
                      {"alpha", r.alpha},
                      {"gap_sharpness", r.gap_sharpness},
                      {"theoretical_alpha_lower", r.theoretical_alpha_lower},
                      {"witness", {{"rows", r.witness.rows}, {"cols", r.witness.cols},
                                   {"inverse_norm", r.witness.inverse_norm}}},
                      {"submatrices_checked", r.submatrices_checked},
                      {"nonsingular_submatrices", r.nonsingular_submatrices},
                      {"rank_one_bound_applicable", r.rank_one_bound_applicable},
                      {"rank_one_checked", r.rank_one_checked},
                      {"rank_one_violations", r.rank_one_violations},
                      {"rank_one_worst_ratio", r.rank_one_worst_ratio}};
}

inline ordered_json to_json(const certify::OptimalFace& face) {
  const auto as_strings = [](const std::vector<exact::Rational>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(r.str());
    return out;
  };
  const PrimalDualPoint z = face.representative();
  return ordered_json{{"optimal_value", face.optimal_value.str()},
                      {"optimal_value_float", face.value()},
                      {"x", std::vector<double>(z.x.begin(), z.x.end())},
                      {"y", std::vector<double>(z.y.begin(), z.y.end())},
                      {"x_exact", as_strings(face.x_exact)},
                      {"y_exact", as_strings(face.y_exact)},
                      {"basis", face.basis}};
}

inline ordered_json to_json(const ConvergenceLog& log) {
  ordered_json epochs = ordered_json::array();
  for (const EpochRecord& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"tau", e.tau},
                      {"inner_iter_total", e.inner_iter_total},
                      {"rho_ref", number_or_null(e.rho_ref)},
                      {"rho_at_restart", number_or_null(e.rho_at_restart)},
                      {"start_norm", e.start_norm},
                      {"start_displacement", e.start_displacement},
                      {"kkt_norm", e.kkt_norm},
                      {"dist_to_opt", e.distance_to_optimal ? ordered_json(*e.distance_to_optimal) : ordered_json(nullptr)},
                      {"completed", e.completed}});
  }
  return ordered_json{{"termination_reason", to_string(log.termination_reason)},
                      {"total_iterations", log.total_iterations},
                      {"total_matvecs", log.total_matvecs},
                      {"gradient_evaluations", log.gradient_evaluations},
                      {"eta", log.eta},
                      {"norm_a", log.norm_a},
                      {"beta", log.beta},
                      {"tau0", log.tau0},
                      {"kkt_radius", log.kkt_radius},
                      {"epochs", epochs}};
}

// ---------------------------------------------------------------------------

struct CheckResult {
  bool passed = false;
  ordered_json detail;
};

struct ExperimentResult {
  int exit_status = 0;
  std::optional<ConvergenceLog> log;
  std::vector<io::EpochChecks> epoch_checks;
  ordered_json summary;
  std::vector<std::string> warnings;
};

namespace internal {

inline constexpr double kBoundSlack = 1e-8;

inline bool oracle_in_guard(const StandardFormLP& lp) {
  return lp.num_constraints() <= certify::kOracleMaxConstraints && lp.num_variables() <= certify::kOracleMaxVariables;
}

inline bool sharpness_in_guard(const StandardFormLP& lp) {
  const int rows = 1 + lp.num_constraints() + lp.num_variables();
  return rows <= certify::kHoffmanGuard;
}

inline bool tu_in_guard(const StandardFormLP& lp) {
  return std::min(lp.num_constraints(), lp.num_variables()) <= tu::kEnumerationGuard;
}

// Points of Z with ||z|| <= radius: half spread over the ball, half clustered
// around z* at logarithmically spread offsets. Paired with radii r in (0, R].
inline std::vector<std::pair<PrimalDualPoint, double>> sample_points(const StandardFormLP& lp,
                                                                     const PrimalDualPoint& z_star, double radius,
                                                                     int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m1 = lp.num_constraints();
  const int m2 = lp.num_variables();
  const double dim = static_cast<double>(m1 + m2);
  std::vector<std::pair<PrimalDualPoint, double>> out;
  for (int s = 0; s < count; ++s) {
    PrimalDualPoint dir{Eigen::VectorXd(m2), Eigen::VectorXd(m1)};
    for (int j = 0; j < m2; ++j) dir.x[j] = normal(rng);
    for (int i = 0; i < m1; ++i) dir.y[i] = normal(rng);
    PrimalDualPoint z;
    if (s % 2 == 0) {
      dir.x = dir.x.cwiseAbs();
      z = (radius * std::pow(unit(rng), 1.0 / dim) / dir.norm()) * dir;
    } else {
      const double offset = std::pow(10.0, -6.0 * unit(rng)) * radius / 4.0;
      z = z_star + (offset / dir.norm()) * dir;
      z.x = z.x.cwiseMax(0.0);
      if (unit(rng) < 0.3) {
        for (int j = 0; j < m2; ++j) {
          if (z_star.x[j] == 0.0) z.x[j] = 0.0;
        }
      }
      const double n = z.norm();
      if (n > radius) z = (radius / n) * z;
    }
    const double r = radius * std::pow(10.0, -4.0 * unit(rng));
    out.emplace_back(std::move(z), r);
  }
  return out;
}

}  // namespace internal

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  const StandardFormLP lp = spec.instance_path ? io::load_instance(*spec.instance_path)
                                               : generate_instance(*spec.generator, spec.seed);

  const std::int64_t radius = certify::radius_R(lp);
  const double norm_a = spectral_norm_estimate(lp.A(), 1e-12, 100000, spec.seed).value;
  require(norm_a > 0.0, ErrorCode::kInvalidArgument, "constraint matrix is zero");
  const double eta = spec.eta_scale / norm_a;

  ordered_json summary;
  summary["instance"] = {{"m1", lp.num_constraints()},
                         {"m2", lp.num_variables()},
                         {"nnz", lp.A().nnz()},
                         {"H", lp.max_data_magnitude()},
                         {"R", radius},
                         {"exact_integer", lp.A().is_exact_integer()}};
  summary["solver"] = {{"eta", eta}, {"norm_a", norm_a}, {"beta", spec.beta}, {"tau0", spec.tau0},
                       {"kkt_tol", spec.kkt_tol}, {"seed", spec.seed}};

  const auto wants = [&](Check c) { return std::find(spec.checks.begin(), spec.checks.end(), c) != spec.checks.end(); };
  const bool needs_oracle = std::any_of(spec.checks.begin(), spec.checks.end(), [](Check c) { return c != Check::kTu; });
  const bool needs_sharpness = wants(Check::kTstar) || wants(Check::kLinearDecay) || wants(Check::kSharpness) ||
                               wants(Check::kHoffman) || wants(Check::kLemma5);

  std::map<Check, std::string> disabled;
  std::optional<certify::OptimalFace> face;
  std::optional<certify::OptimalSetDistance> dist;
  std::optional<certify::SharpnessReport> sharp;
  std::map<Check, CheckResult> outcomes;

  const auto disable_all = [&](const std::string& why, bool (*pred)(Check)) {
    for (Check c : spec.checks) {
      if (pred(c) && disabled.count(c) == 0 && outcomes.count(c) == 0) disabled[c] = why;
    }
  };

  if (needs_oracle) {
    if (!internal::oracle_in_guard(lp)) {
      disable_all("instance exceeds the exact-oracle size limit", [](Check c) { return c != Check::kTu; });
    } else {
      try {
        face = certify::solve_exact(lp);
        dist.emplace(lp, *face);
        summary["optimal_face"] = to_json(*face);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kGuardExceeded) throw;
        for (Check c : spec.checks) {
          if (c != Check::kTu) outcomes[c] = {false, {{"error", e.what()}}};
        }
      }
    }
  }
  if (needs_sharpness && face) {
    if (!internal::sharpness_in_guard(lp)) {
      disable_all("KKT matrix exceeds the submatrix enumeration limit", [](Check c) {
        return c == Check::kTstar || c == Check::kLinearDecay || c == Check::kSharpness || c == Check::kHoffman ||
               c == Check::kLemma5;
      });
    } else {
      sharp = certify::sharpness_alpha(lp, radius);
      summary["sharpness"] = to_json(*sharp);
    }
  }

  std::optional<std::int64_t> tstar;
  if (sharp) tstar = certify::theoretical_tstar(sharp->alpha, eta, norm_a, spec.beta);

  if (spec.solve) {
    SolverConfig config;
    config.eta = eta;
    config.norm_a = norm_a;
    config.beta = spec.beta;
    config.tau0 = spec.tau0;
    config.termination_kkt_tol = spec.kkt_tol;
    config.max_epochs = spec.max_epochs;
    config.max_total_iters = spec.max_total_iters;
    config.record_gap_evaluations = false;
    DistanceOracle oracle;
    if (dist) oracle = [&](const PrimalDualPoint& z) { return (*dist)(z); };
    const PrimalDualPoint z0 = PrimalDualPoint::zeros(lp.num_constraints(), lp.num_variables());
    result.log = run_restarted(lp, z0, config, oracle);
    const ConvergenceLog& log = *result.log;

    summary["termination_reason"] = to_string(log.termination_reason);
    summary["epochs"] = log.epochs.size();
    summary["total_iterations"] = log.total_iterations;
    summary["total_matvecs"] = log.total_matvecs;
    summary["gradient_evaluations"] = log.gradient_evaluations;
    summary["final_kkt_norm"] = log.epochs.back().kkt_norm;

    result.epoch_checks.resize(log.epochs.size());
    if (dist && !disabled.count(Check::kThetaBall)) {
      const double d0 = *log.epochs.front().distance_to_optimal;
      const double bound = certify::containment_factor(eta, norm_a) * d0;
      double worst = 0.0;
      bool ok = true;
      for (std::size_t k = 0; k < log.epochs.size(); ++k) {
        const double disp = log.epochs[k].start_displacement;
        worst = std::max(worst, disp);
        result.epoch_checks[k].theta_ball_ok = disp <= bound + internal::kBoundSlack;
        ok = ok && *result.epoch_checks[k].theta_ball_ok;
      }
      if (wants(Check::kThetaBall)) outcomes[Check::kThetaBall] = {ok, {{"measured", worst}, {"bound", bound}}};
    }
    if (tstar) {
      std::int64_t worst = 0;
      bool ok = true;
      for (std::size_t k = 1; k < log.epochs.size(); ++k) {
        if (!log.epochs[k].completed) continue;
        worst = std::max(worst, log.epochs[k].tau);
        result.epoch_checks[k].tstar_bound_ok = log.epochs[k].tau <= *tstar;
        ok = ok && *result.epoch_checks[k].tstar_bound_ok;
      }
      if (wants(Check::kTstar)) outcomes[Check::kTstar] = {ok, {{"measured", worst}, {"bound", *tstar}}};
      if (wants(Check::kLinearDecay)) {
        const double d0 = *log.epochs.front().distance_to_optimal;
        double worst_excess = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < log.epochs.size(); ++k) {
          const double bound = std::pow(spec.beta, static_cast<double>(k)) *
                               (static_cast<double>(*tstar) / static_cast<double>(spec.tau0)) * d0;
          worst_excess = std::max(worst_excess, *log.epochs[k].distance_to_optimal - bound);
        }
        outcomes[Check::kLinearDecay] = {worst_excess <= internal::kBoundSlack,
                                         {{"measured", worst_excess}, {"bound", internal::kBoundSlack}}};
      }
    }
  }

  if (sharp && face && dist) {
    const PrimalDualPoint z_star = face->representative();
    const auto samples = internal::sample_points(lp, z_star, static_cast<double>(radius), spec.samples, spec.seed);
    if (wants(Check::kSharpness)) {
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& [z, r] : samples) worst = std::max(worst, sharp->alpha * (*dist)(z) - rho(lp, z, r));
      const bool lower_ok = sharp->alpha >= sharp->theoretical_alpha_lower;
      outcomes[Check::kSharpness] = {worst <= internal::kBoundSlack && lower_ok,
                                     {{"measured", worst},
                                      {"bound", internal::kBoundSlack},
                                      {"alpha", sharp->alpha},
                                      {"theoretical_alpha_lower", sharp->theoretical_alpha_lower}}};
    }
    if (wants(Check::kHoffman)) {
      double worst = 0.0;
      for (const auto& [z, r] : samples) {
        const double residual = kkt_residual(lp, z, static_cast<double>(radius)).norm;
        const double d = (*dist)(z);
        if (residual > 0.0) worst = std::max(worst, sharp->alpha * d / residual);
      }
      outcomes[Check::kHoffman] = {worst <= 1.0 + 1e-9, {{"measured", worst}, {"bound", 1.0}}};
    }
    if (wants(Check::kLemma5)) {
      outcomes[Check::kLemma5] = {sharp->rank_one_bound_applicable && sharp->rank_one_violations == 0,
                                  {{"measured", sharp->rank_one_worst_ratio},
                                   {"bound", 1.0},
                                   {"checked", sharp->rank_one_checked},
                                   {"violations", sharp->rank_one_violations}}};
    }
  }

  if (wants(Check::kSchur) && face) {
    // Blocks shaped like the sign-constraint elimination: M11 an optimal basis
    // matrix, M12 the remaining columns, M22 the identity.
    const std::vector<int> rows = exact::independent_rows(lp.A().to_rational());
    const Eigen::MatrixXd a = lp.A().to_dense();
    std::vector<int> others;
    for (int j = 0; j < lp.num_variables(); ++j) {
      if (std::find(face->basis.begin(), face->basis.end(), j) == face->basis.end()) others.push_back(j);
    }
    Eigen::MatrixXd m11(rows.size(), face->basis.size());
    Eigen::MatrixXd m12(rows.size(), std::max<std::size_t>(others.size(), 1));
    m12.setZero();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < face->basis.size(); ++k) m11(i, k) = a(rows[i], face->basis[k]);
      for (std::size_t k = 0; k < others.size(); ++k) m12(i, k) = a(rows[i], others[k]);
    }
    const Eigen::MatrixXd m22 = Eigen::MatrixXd::Identity(m12.cols(), m12.cols());
    const auto check = certify::schur_limit_check(m11, m12, m22, {1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
    outcomes[Check::kSchur] = {check.decays && std::abs(check.slope + 1.0) <= 0.1,
                               {{"measured", check.slope}, {"bound", -1.0}, {"max_deviation", check.max_deviation}}};
  }

  if (wants(Check::kTu)) {
    if (!lp.A().is_exact_integer()) {
      outcomes[Check::kTu] = {false, {{"error", "matrix has non-integer entries"}}};
    } else if (!internal::tu_in_guard(lp)) {
      disabled[Check::kTu] = "matrix exceeds the TU enumeration limit";
    } else {
      const auto cert = tu::is_totally_unimodular(lp.A());
      ordered_json detail = {{"submatrices_checked", cert.submatrices_checked}};
      if (cert.witness) detail["witness_determinant"] = cert.witness->determinant.str();
      outcomes[Check::kTu] = {cert.verdict, detail};
    }
  }

  ordered_json checks = ordered_json::object();
  bool all_passed = true;
  bool any_run = false;
  for (Check c : spec.checks) {
    if (auto it = outcomes.find(c); it != outcomes.end()) {
      ordered_json entry = {{"passed", it->second.passed}};
      entry.update(it->second.detail);
      checks[to_string(c)] = entry;
      all_passed = all_passed && it->second.passed;
      any_run = true;
    } else {
      const std::string why = disabled.count(c) ? disabled[c] : "prerequisites unavailable";
      result.warnings.push_back("check '" + to_string(c) + "' disabled: " + why);
      checks[to_string(c)] = {{"passed", nullptr}, {"disabled", why}};
    }
  }
  summary["checks"] = checks;
  summary["warnings"] = result.warnings;
  result.exit_status = all_passed ? 0 : 1;
  if (!spec.solve && !any_run) result.exit_status = 3;
  summary["exit_status"] = result.exit_status;
  result.summary = summary;

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path dir(spec.out_dir);
    if (result.log) {
      if (spec.format == OutputFormat::kCsv) {
        io::emit_convergence_csv(*result.log, (dir / "convergence.csv").string(), result.epoch_checks);
      } else {
        std::ofstream out(dir / "convergence.json", std::ios::binary);
        require(out.good(), ErrorCode::kIo, "cannot write convergence.json");
        out << to_json(*result.log).dump(2) << '\n';
      }
    }
    std::ofstream out(dir / "summary.json", std::ios::binary);
    require(out.good(), ErrorCode::kIo, "cannot write summary.json");
    out << summary.dump(2) << '\n';
  }
  return result;
}

// Maps library errors onto the tool's exit statuses.
inline int exit_status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kIo:
      return 2;
    case ErrorCode::kGuardExceeded:
      return 3;
    default:
      return 1;
  }
}

}  // namespace rpdhg::harness
