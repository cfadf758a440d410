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

#include "critvar/gm_transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critvar/errors.hpp"

namespace critvar {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double max_norm(std::span<const Complex> v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

// Right-hand side on one segment: (1/kappa) sum_j dx_j K_j(x(s)) c.
class SegmentSystem {
 public:
  SegmentSystem(const OperatorFamily& ops, Complex kappa, const PathPoint& from, const PathPoint& to)
      : ops_(ops), kappa_(kappa), from_(from), delta_(from.size()) {
    for (std::size_t j = 0; j < from.size(); ++j) delta_[j] = to[j] - from[j];
  }

  Eigen::VectorXcd operator()(double s, const Eigen::VectorXcd& c) const {
    PathPoint x(from_.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = from_[j] + s * delta_[j];
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (delta_[j] == Complex(0)) continue;
      out += delta_[j] * (ops_.k_j_restricted_numeric(x, static_cast<int>(j)) * c);
    }
    return out / kappa_;
  }

 private:
  const OperatorFamily& ops_;
  Complex kappa_;
  const PathPoint& from_;
  std::vector<Complex> delta_;
};

}  // namespace

double segment_circuit_distance(const OperatorFamily& ops, const PathPoint& from, const PathPoint& to) {
  std::vector<Complex> delta(from.size());
  for (std::size_t j = 0; j < from.size(); ++j) delta[j] = to[j] - from[j];
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : ops.circuits()) {
    Complex f0 = c.evaluate(from);
    Complex df = c.evaluate(delta);
    double s = 0.0;
    if (std::norm(df) > 0) s = std::clamp(-std::real(std::conj(df) * f0) / std::norm(df), 0.0, 1.0);
    best = std::min(best, std::abs(f0 + s * df));
  }
  return best;
}

TransportResult transport(const OperatorFamily& ops, const TransportTask& task,
                          const TransportOptions& options) {
  if (task.kappa == Complex(0)) throw ValidationError("kappa must be nonzero");
  if (task.path.empty()) throw ValidationError("empty path");
  if (task.initial.size() != ops.sing_dim())
    throw ValidationError("initial vector needs " + std::to_string(ops.sing_dim()) + " Sing coordinates");
  for (const auto& x : task.path)
    if (x.size() != ops.n()) throw ValidationError("path points must have n coordinates");

  TransportResult result;
  result.min_circuit_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(task.initial.size()));
  for (std::size_t i = 0; i < task.initial.size(); ++i) c(static_cast<Eigen::Index>(i)) = task.initial[i];

  for (std::size_t seg = 0; seg + 1 < task.path.size(); ++seg) {
    const auto& from = task.path[seg];
    const auto& to = task.path[seg + 1];
    double scale = 1.0;
    for (const auto& z : from) scale = std::max(scale, std::abs(z));
    for (const auto& z : to) scale = std::max(scale, std::abs(z));
    double dist = segment_circuit_distance(ops, from, to);
    result.min_circuit_value = std::min(result.min_circuit_value, dist);
    if (dist <= options.near_disc_tol * scale)
      throw DiscriminantError("path segment " + std::to_string(seg + 1) + " passes within " +
                              std::to_string(dist) + " of the discriminant");
    if (from == to) continue;

    SegmentSystem rhs(ops, task.kappa, from, to);
    double s = 0.0;
    double h = 0.05;
    Eigen::VectorXcd k1 = rhs(s, c);
    while (s < 1.0) {
      if (result.steps + result.rejected >= options.max_steps) throw NumericalError("transport step budget exhausted");
      h = std::min(h, 1.0 - s);
      Eigen::VectorXcd k2 = rhs(s + c2 * h, c + h * (a21 * k1));
      Eigen::VectorXcd k3 = rhs(s + c3 * h, c + h * (a31 * k1 + a32 * k2));
      Eigen::VectorXcd k4 = rhs(s + c4 * h, c + h * (a41 * k1 + a42 * k2 + a43 * k3));
      Eigen::VectorXcd k5 = rhs(s + c5 * h, c + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      Eigen::VectorXcd k6 = rhs(s + h, c + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Eigen::VectorXcd next = c + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Eigen::VectorXcd k7 = rhs(s + h, next);
      Eigen::VectorXcd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double ratio = 0.0;
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        double sc = options.ode_tol * (1.0 + std::max(std::abs(c(i)), std::abs(next(i))));
        ratio = std::max(ratio, std::abs(err(i)) / sc);
      }
      if (ratio <= 1.0) {
        s += h;
        c = next;
        k1 = k7;  // first-same-as-last
        result.error_estimate += err.cwiseAbs().maxCoeff();
        ++result.steps;
      } else {
        ++result.rejected;
      }
      double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      h *= factor;
      if (s < 1.0 && h < options.min_step) throw NumericalError("transport step underflow");
    }
  }
  result.end.assign(c.data(), c.data() + c.size());
  return result;
}

std::vector<TransportResult> transport_all(const OperatorFamily& ops, std::span<const TransportTask> tasks,
                                           const TransportOptions& options, Execution exec) {
  std::vector<TransportResult> out(tasks.size());
  const long count = static_cast<long>(tasks.size());
  if (exec == Execution::Parallel) {
    // exceptions cannot leave an OpenMP region; collect and rethrow the first
    std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < count; ++t) {
      try {
        out[static_cast<std::size_t>(t)] = transport(ops, tasks[static_cast<std::size_t>(t)], options);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (long t = 0; t < count; ++t)
      out[static_cast<std::size_t>(t)] = transport(ops, tasks[static_cast<std::size_t>(t)], options);
  }
  return out;
}

std::vector<PathPoint> rectangle_loop(const PathPoint& base, int i, int j, Complex side_i, Complex side_j) {
  PathPoint p1 = base, p2 = base, p3 = base;
  p1[static_cast<std::size_t>(i)] += side_i;
  p2[static_cast<std::size_t>(i)] += side_i;
  p2[static_cast<std::size_t>(j)] += side_j;
  p3[static_cast<std::size_t>(j)] += side_j;
  return {base, p1, p2, p3, base};
}

double loop_flatness(const OperatorFamily& ops, const TransportTask& loop, const TransportOptions& options) {
  if (loop.path.front() != loop.path.back()) throw ValidationError("loop must be closed");
  auto result = transport(ops, loop, options);
  double diff = 0, norm = 0;
  for (std::size_t i = 0; i < result.end.size(); ++i) {
    diff += std::norm(result.end[i] - loop.initial[i]);
    norm += std::norm(loop.initial[i]);
  }
  if (norm == 0.0) throw ValidationError("loop flatness needs a nonzero initial vector");
  return std::sqrt(diff / norm);
}

double path_length(std::span<const PathPoint> path) {
  double total = 0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    double seg = 0;
    for (std::size_t j = 0; j < path[s].size(); ++j) seg += std::norm(path[s + 1][j] - path[s][j]);
    total += std::sqrt(seg);
  }
  return total;
}

double mixed_partial_defect(const OperatorFamily& ops, Complex kappa, const PathPoint& x,
                            std::span<const Complex> initial, int i, int j, double h,
                            const TransportOptions& options) {
  auto shifted = [&](int axis, double step) {
    PathPoint y = x;
    y[static_cast<std::size_t>(axis)] += step;
    TransportTask task{kappa, {x, y}, std::vector<Complex>(initial.begin(), initial.end())};
    auto section = transport(ops, task, options).end;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(section.size()));
    for (std::size_t r = 0; r < section.size(); ++r) v(static_cast<Eigen::Index>(r)) = section[r];
    // K_other(y) I(y), where other is the index not being differentiated
    return std::pair{y, v};
  };
  auto derivative = [&](int axis, int other) {
    auto [yp, vp] = shifted(axis, h);
    auto [ym, vm] = shifted(axis, -h);
    Eigen::VectorXcd up = ops.k_j_restricted_numeric(yp, other) * vp;
    Eigen::VectorXcd um = ops.k_j_restricted_numeric(ym, other) * vm;
    return Eigen::VectorXcd((up - um) / (2.0 * h));
  };
  Eigen::VectorXcd diff = derivative(i, j) - derivative(j, i);
  std::vector<Complex> d(diff.data(), diff.data() + diff.size());
  return max_norm(d);
}

}  // namespace critvar
