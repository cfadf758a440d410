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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"
#include "critvar/circuit_operators.hpp"
#include "critvar/critical_solver.hpp"
#include "critvar/gm_transport.hpp"
#include "critvar/lagrangian.hpp"
#include "json.hpp"

namespace critvar {

inline constexpr const char* kVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string details;
};

struct RunOptions {
  SolverOptions solver;
  TransportOptions transport;
  Execution exec = Execution::Serial;
};

struct Certificate {
  std::vector<CheckRecord> checks;
  RunOptions options;

  /// All non-skipped checks pass.
  bool certified() const;
  const CheckRecord* find(const std::string& name) const;
};

/// Everything computed for one input, built in dependency order. Members
/// stay empty when an earlier stage failed.
struct Analysis {
  ArrangementInput input;
  std::optional<MasterContext> ctx;
  std::optional<FlagComplex> flags;
  std::optional<CriticalAlgebraModel> crit;
  std::optional<SingularSubspace> sing;
  std::optional<OperatorFamily> ops;
  std::optional<LagrangianModel> lagrangian;
  std::vector<LagrangianPoint> fiber;
};

/// Builds the MasterContext; throws DiscriminantError when x is on the
/// discriminant and ValidationError for inconsistent data.
Analysis start_analysis(ArrangementInput input, const RunOptions& options);

/// Runs every check in the fixed order; module errors become failed checks.
Certificate certify(Analysis& analysis, const RunOptions& options);

/// Checks that only need the solver output.
std::vector<CheckRecord> solver_checks(Analysis& analysis, const RunOptions& options);

nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const CheckRecord& check);
nlohmann::json complex_json(Complex z);
nlohmann::json complex_json(std::span<const Complex> v);
nlohmann::json rational_matrix_json(const RationalMatrix& m);

nlohmann::json analyze_report(const ArrangementInput& input);
nlohmann::json solve_report(Analysis& analysis, const RunOptions& options);
std::string solve_csv(const Analysis& analysis);
nlohmann::json gm_report(Analysis& analysis, const RunOptions& options);
nlohmann::json specvar_report(Analysis& analysis, const RunOptions& options);
nlohmann::json transport_report(Analysis& analysis, const TransportTask& task, const RunOptions& options);

/// Parses "1", "-3/2", "1+2i", "0.5-1i", or a JSON [re, im] pair.
Complex parse_complex(const nlohmann::json& value);
std::vector<PathPoint> parse_path(std::string_view document);
std::vector<Complex> parse_vector(std::string_view document);

}  // namespace critvar
