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

#include <span>
#include <vector>

#include "critvar/circuit_operators.hpp"

namespace critvar {

using PathPoint = std::vector<Complex>;

struct TransportOptions {
  double ode_tol = 1e-9;
  double near_disc_tol = 1e-6;  // relative to max(1, |x|)
  double min_step = 1e-14;      // in segment parameter units
  int max_steps = 1000000;
};

/// kappa dI/dz_j = K_j(x) I along a piecewise-linear path, on Sing coordinates.
struct TransportTask {
  Complex kappa{1.0, 0.0};
  std::vector<PathPoint> path;
  std::vector<Complex> initial;
};

struct TransportResult {
  std::vector<Complex> end;
  double error_estimate = 0.0;  // sum of accepted local error norms
  int steps = 0;
  int rejected = 0;
  double min_circuit_value = 0.0;  // smallest |f_C| seen on the path
};

/// Smallest |f_C(x(s))| over a straight segment and all circuits, in closed form.
double segment_circuit_distance(const OperatorFamily& ops, const PathPoint& from, const PathPoint& to);

/// Dormand-Prince 5(4) integration along the path. Throws DiscriminantError
/// if a segment passes within near_disc_tol of some H_C, NumericalError on
/// step underflow or step budget exhaustion.
TransportResult transport(const OperatorFamily& ops, const TransportTask& task,
                          const TransportOptions& options = {});

/// Independent tasks, one per path; serial and parallel results are identical.
std::vector<TransportResult> transport_all(const OperatorFamily& ops, std::span<const TransportTask> tasks,
                                           const TransportOptions& options = {},
                                           Execution exec = Execution::Serial);

/// Closed rectangle base -> base + side e_i -> + side e_j -> base + side e_j -> base.
std::vector<PathPoint> rectangle_loop(const PathPoint& base, int i, int j, Complex side_i, Complex side_j);

/// |I_end - I_start| / |I_start| after transport around a closed path.
double loop_flatness(const OperatorFamily& ops, const TransportTask& loop,
                     const TransportOptions& options = {});

double path_length(std::span<const PathPoint> path);

/// max over entries of |d_i(K_j I) - d_j(K_i I)| at x, with I continued as a
/// flat section along +-h e_i and +-h e_j (central differences).
double mixed_partial_defect(const OperatorFamily& ops, Complex kappa, const PathPoint& x,
                            std::span<const Complex> initial, int i, int j, double h = 1e-4,
                            const TransportOptions& options = {});

}  // namespace critvar
