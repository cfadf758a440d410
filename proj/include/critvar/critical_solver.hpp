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

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"
#include "critvar/os_flag.hpp"

namespace critvar {

/// Master function Phi = sum_j a_j log f_j on one fiber, f_j(t) = g_j(t) + x_j.
/// Construction enumerates circuits and rejects x on the discriminant.
class MasterContext {
 public:
  MasterContext(ArrangementFamily family, WeightVector weights, FiberPoint x);

  int k() const { return family_.k(); }
  int n() const { return family_.n(); }
  const ArrangementFamily& family() const { return family_; }
  const WeightVector& weights() const { return weights_; }
  const FiberPoint& fiber() const { return x_; }
  const std::vector<Complex>& a() const { return a_; }
  const std::vector<Complex>& x() const { return x_numeric_; }
  const std::vector<Circuit>& circuits() const { return circuits_; }
  long chi() const { return chi_; }

  /// f_j(t) for all j. Throws NumericalError if t lies on a hyperplane.
  std::vector<Complex> affine_values(std::span<const Complex> t) const;

 private:
  ArrangementFamily family_;
  WeightVector weights_;
  FiberPoint x_;
  std::vector<Complex> a_;
  std::vector<Complex> x_numeric_;
  std::vector<Circuit> circuits_;
  long chi_;
};

/// dPhi/dt_i = sum_j b^i_j a_j / f_j.
std::vector<Complex> master_gradient(const MasterContext& ctx, std::span<const Complex> t);

/// dPhi/dz_j = a_j / f_j.
std::vector<Complex> master_z_derivatives(const MasterContext& ctx, std::span<const Complex> t);

/// (-1)^k sum_{|I|=k} d_I^2 prod_{i in I} a_i / f_i^2.
Complex master_hessian(const MasterContext& ctx, std::span<const Complex> t);

/// Matrix of second derivatives -sum_j a_j b^i_j b^l_j / f_j^2.
Eigen::MatrixXcd master_hessian_matrix(const MasterContext& ctx, std::span<const Complex> t);

/// sum_I |d_I^2 prod a_i / f_i^2|, the magnitude scale for degeneracy tests.
double hessian_scale(const MasterContext& ctx, std::span<const Complex> t);

/// Auto picks companion (k = 1), regions (positive weights) or multistart.
enum class SolverStrategy { Auto, Multistart };

struct SolverOptions {
  double residual_tol = 1e-11;  // multiplied by 1 + |a| / min|f_j(u)|
  double dedup_tol = 1e-8;
  double degeneracy_tol = 1e-10;
  int max_halvings = 60;
  int max_newton_iterations = 200;
  int budget_per_point = 200;
  std::uint64_t seed = 20261015;
  Execution exec = Execution::Serial;
  SolverStrategy strategy = SolverStrategy::Auto;
};

struct CriticalPoint {
  std::vector<Complex> u;
  double residual = 0.0;
  Complex hessian;
  std::vector<Complex> lagrangian_image;  // p_j = a_j / f_j(u)
  int multiplicity = 1;
  bool degenerate = false;
};

/// Evaluation model of the algebra of functions on the critical set.
struct CriticalAlgebraModel {
  std::vector<CriticalPoint> points;
  long chi = 0;
  std::string method;
  std::size_t seeds_used = 0;
  std::vector<std::string> warnings;

  bool complete() const;    // multiplicity sum equals |chi|
  bool certifying() const;  // complete and no degenerate point
};

/// Bounded chamber of the real arrangement A(x) with its vertices and the
/// exact centroid of those vertices (an interior point).
struct Region {
  std::vector<int> signs;  // sign of f_j on the region
  std::vector<std::vector<Rational>> vertices;
  std::vector<Rational> centroid;
};

/// Bounded regions of the real fiber, found exactly from vertex
/// neighbourhoods and recession-cone tests. Sorted by sign vector.
std::vector<Region> bounded_regions(const ArrangementFamily& family, const FiberPoint& x);

/// Finds the critical points on the fiber; see the notes in the source for
/// the three strategies. Throws DiscriminantError for x near the
/// discriminant; an undercount is reported as a warning, not an exception.
CriticalAlgebraModel solve_critical(const MasterContext& ctx, const SolverOptions& options = {});

/// Newton maximization of the real master function inside one region.
/// Exposed for the serial/parallel comparison and the benchmark.
CriticalPoint newton_in_region(const MasterContext& ctx, const Region& region,
                               const SolverOptions& options);

/// Residual and Hessian bookkeeping for a candidate point.
CriticalPoint make_critical_point(const MasterContext& ctx, std::vector<Complex> u,
                                  const SolverOptions& options);

double residual_tolerance(const MasterContext& ctx, std::span<const Complex> u,
                          const SolverOptions& options);

/// max|grad| over the largest sum of absolute gradient terms. A genuine
/// critical point gives roundoff; points drifting to infinity do not.
double gradient_cancellation(const MasterContext& ctx, std::span<const Complex> u);
inline constexpr double kCancellationLimit = 1e-8;

/// Both the absolute residual test and the cancellation test.
bool is_critical(const MasterContext& ctx, std::span<const Complex> u, const SolverOptions& options);

/// Special vector F(u): coordinate on independent I is d_I / prod_{i in I} f_i(u).
std::vector<Complex> specialization_vector(const MasterContext& ctx, const FlagComplex& fc,
                                           std::span<const Complex> u);

/// S^(a)(u, v) on F^k with complex coordinates (bilinear, no conjugation).
Complex contravariant_form(const MasterContext& ctx, const FlagComplex& fc,
                           std::span<const Complex> u, std::span<const Complex> v);

/// E: [g] -> sum_u g(u) / Hess(u) F(u). Throws NumericalError on a degenerate point.
std::vector<Complex> canonical_iso(const MasterContext& ctx, const FlagComplex& fc,
                                   const CriticalAlgebraModel& model, std::span<const Complex> g);

/// [S^(a)](F): the function u -> S^(a)(F, F(u)) on the critical set.
std::vector<Complex> s_projection(const MasterContext& ctx, const FlagComplex& fc,
                                  const CriticalAlgebraModel& model, std::span<const Complex> f);

/// w_I = d_I prod a_i / f_i at every point; result[subset][point], indexed like fc.top().
std::vector<std::vector<Complex>> marked_w_elements(const MasterContext& ctx, const FlagComplex& fc,
                                                    const CriticalAlgebraModel& model);

/// Largest |sum_j w_{j,i_2..i_k}(u)| over labels and points, relative to the
/// largest |w| involved. Throws ConsistencyError above tol.
double marked_w_relation_residual(const FlagComplex& fc,
                                  const std::vector<std::vector<Complex>>& w, double tol = 1e-10);

/// Nondegenerate Grothendieck residue pairing sum_u f(u) g(u) / Hess(u).
Complex residue_form(const CriticalAlgebraModel& model, std::span<const Complex> f,
                     std::span<const Complex> g);

}  // namespace critvar
