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

// Command-line driver: solve an LP with restarted PDHG and run certificate
// checks. Exit status 0 when every requested check passes, 1 on a failed
// check, 2 on bad input, 3 when nothing could be checked within the guards.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rpdhg/harness.hpp"

int main(int argc, char** argv) {
  using rpdhg::harness::ExperimentSpec;
  CLI::App app{"Restarted PDHG solver and certification harness"};
  ExperimentSpec spec;
  std::string instance;
  std::string generator;
  std::string checks;
  std::string format = "csv";
  bool no_solve = false;
  app.add_option("--instance", instance, "LP instance file");
  app.add_option("--generator", generator,
                 "triangle | path3 | flow:<nodes>:<arcs> | assignment:<n> | flow spec file");
  app.add_option("--seed", spec.seed, "generator and sampling seed");
  app.add_option("--eta-scale", spec.eta_scale, "step size as a fraction of 1/||A||_2")->capture_default_str();
  app.add_option("--beta", spec.beta, "restart factor in (0,1)")->capture_default_str();
  app.add_option("--tau0", spec.tau0, "length of the first epoch")->capture_default_str();
  app.add_option("--kkt-tol", spec.kkt_tol, "terminate when the KKT residual drops below this")->capture_default_str();
  app.add_option("--checks", checks, "comma-separated checks, or 'all'");
  app.add_option("--out", spec.out_dir, "output directory");
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--max-epochs", spec.max_epochs)->capture_default_str();
  app.add_option("--max-iters", spec.max_total_iters)->capture_default_str();
  app.add_option("--samples", spec.samples, "sampled points per sampling check")->capture_default_str();
  app.add_flag("--no-solve", no_solve, "run checks only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!instance.empty()) spec.instance_path = instance;
    if (!generator.empty()) spec.generator = generator;
    spec.solve = !no_solve;
    spec.checks = rpdhg::harness::parse_checks(checks);
    rpdhg::require(format == "csv" || format == "json", rpdhg::ErrorCode::kParse, "format must be csv or json");
    spec.format = format == "csv" ? rpdhg::harness::OutputFormat::kCsv : rpdhg::harness::OutputFormat::kJson;
    const auto result = rpdhg::harness::run_experiment(spec);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    if (spec.out_dir.empty()) std::cout << result.summary.dump(2) << '\n';
    return result.exit_status;
  } catch (const rpdhg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rpdhg::harness::exit_status_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
