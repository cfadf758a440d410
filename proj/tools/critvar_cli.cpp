// Copyright 2026 The Authors.
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

// critvar: analyze, solve, gm, specvar, transport, certify.
// Reads one JSON input document, writes JSON (or CSV) to stdout.
//
// Exit codes: 0 success (for certify: certified), 1 certify ran but some
// check failed, 2 input/validation/discriminant error, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "critvar/errors.hpp"
#include "critvar/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw critvar::ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// --path and --initial accept inline JSON or @file.
std::string inline_or_file(const std::string& value) {
  if (!value.empty() && value.front() == '@') return read_file(value.substr(1));
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points, Gauss-Manin operators and Lagrangian fibers of weighted arrangements"};
  app.require_subcommand(1);

  critvar::RunOptions options;
  bool parallel = false;
  app.add_option("--residual-tol", options.solver.residual_tol, "Newton residual tolerance (scaled)")
      ->capture_default_str();
  app.add_option("--dedup-tol", options.solver.dedup_tol, "relative distance for merging roots")
      ->capture_default_str();
  app.add_option("--ode-tol", options.transport.ode_tol, "transport step tolerance")->capture_default_str();
  app.add_option("--near-disc-tol", options.transport.near_disc_tol, "relative discriminant clearance")
      ->capture_default_str();
  app.add_option("--seed", options.solver.seed, "seed for multistart and spectrum combinations")
      ->capture_default_str();
  app.add_flag("--parallel", parallel, "use the OpenMP kernels");

  std::string file;
  bool csv = false;
  std::string kappa = "1", path, initial;

  auto* analyze = app.add_subcommand("analyze", "circuits, chi, discriminant, unbalancedness");
  auto* solve = app.add_subcommand("solve", "critical points with residuals and solver checks");
  solve->add_flag("--csv", csv, "flat table instead of JSON");
  auto* gm = app.add_subcommand("gm", "exact K_j(x) on F^k and on Sing");
  auto* specvar = app.add_subcommand("specvar", "joint spectrum of K_j(x) against the Lagrangian fiber");
  auto* trans = app.add_subcommand("transport", "transport a Sing vector along a path");
  trans->add_option("--kappa", kappa, "nonzero complex, e.g. 2 or 1+1i")->capture_default_str();
  trans->add_option("--path", path, "JSON list of x points (or @file)")->required();
  trans->add_option("--initial", initial, "JSON list of Sing coordinates (or @file); default e_1");
  auto* cert = app.add_subcommand("certify", "run every consistency check");
  for (auto* sub : {analyze, solve, gm, specvar, trans, cert})
    sub->add_option("file", file, "input JSON document")->required();

  CLI11_PARSE(app, argc, argv);
  options.exec = parallel ? critvar::Execution::Parallel : critvar::Execution::Serial;
  options.solver.exec = options.exec;

  try {
    auto input = critvar::load_family(read_file(file));
    if (analyze->parsed()) {
      std::cout << critvar::analyze_report(input).dump(2) << "\n";
      return 0;
    }
    auto analysis = critvar::start_analysis(std::move(input), options);
    if (solve->parsed()) {
      auto report = critvar::solve_report(analysis, options);
      if (csv) std::cout << critvar::solve_csv(analysis);
      else std::cout << report.dump(2) << "\n";
      return 0;
    }
    if (gm->parsed()) {
      std::cout << critvar::gm_report(analysis, options).dump(2) << "\n";
      return 0;
    }
    if (specvar->parsed()) {
      std::cout << critvar::specvar_report(analysis, options).dump(2) << "\n";
      return 0;
    }
    if (trans->parsed()) {
      critvar::TransportTask task;
      task.kappa = critvar::parse_complex(nlohmann::json(kappa));
      task.path = critvar::parse_path(inline_or_file(path));
      if (!initial.empty()) {
        task.initial = critvar::parse_vector(inline_or_file(initial));
      } else {
        auto sing = critvar::singular_subspace(*analysis.flags, analysis.input.weights, analysis.ctx->chi());
        task.initial.assign(sing.dim(), 0.0);
        if (!task.initial.empty()) task.initial[0] = 1.0;
      }
      std::cout << critvar::transport_report(analysis, task, options).dump(2) << "\n";
      return 0;
    }
    auto certificate = critvar::certify(analysis, options);
    std::cout << critvar::to_json(certificate).dump(2) << "\n";
    return certificate.certified() ? 0 : 1;
  } catch (const critvar::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const critvar::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const critvar::DiscriminantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
