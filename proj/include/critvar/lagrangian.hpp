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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"
#include "critvar/circuit_operators.hpp"
#include "critvar/critical_solver.hpp"
#include "critvar/os_flag.hpp"

namespace critvar {

/// Sparse Laurent polynomial in q_1..q_n, p_1..p_n with rational
/// coefficients. A key holds 2n exponents, q's first.
class LaurentPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit LaurentPolynomial(int n = 0) : n_(n) {}

  static LaurentPolynomial q(int n, int j, Rational c = 1);
  static LaurentPolynomial p(int n, int j, int power, Rational c = 1);

  int n() const { return n_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Rational& c);
  LaurentPolynomial derivative_q(int j) const;
  LaurentPolynomial derivative_p(int j) const;

  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-(const LaurentPolynomial& o) const;
  LaurentPolynomial operator*(const LaurentPolynomial& o) const;

  Complex evaluate(std::span<const Complex> q, std::span<const Complex> p) const;
  std::string to_string() const;

 private:
  int n_;
  std::map<Exponents, Rational> terms_;
};

/// sum_j (d fa/d q_j)(d fb/d p_j) - (d fa/d p_j)(d fb/d q_j), exact.
/// Throws ValidationError when the two forms live in different numbers of variables.
LaurentPolynomial poisson_bracket(const LaurentPolynomial& fa, const LaurentPolynomial& fb);

/// L_{Y,a} for Y = row space of B.
class LagrangianModel {
 public:
  /// Throws ValidationError if some coordinate vector lies in Y.
  LagrangianModel(const ArrangementFamily& family, WeightVector a,
                  const std::vector<Circuit>& circuits);

  int k() const { return family_.k(); }
  int n() const { return family_.n(); }
  const ArrangementFamily& family() const { return family_; }
  const WeightVector& weights() const { return a_; }
  /// Rows are a basis of Y^perp chosen greedily from circuit vectors.
  const RationalMatrix& yperp_basis() const { return yperp_; }

  /// F for each row of B, then G for each row of the Y^perp basis.
  std::vector<LaurentPolynomial> generators() const;

 private:
  ArrangementFamily family_;
  WeightVector a_;
  RationalMatrix yperp_;
};

struct LagrangianPoint {
  std::vector<Complex> x;  // q-coordinates
  std::vector<Complex> p;
  double residual = 0.0;   // max |generator|
};

/// Psi(u): p_j = a_j / f_j(u), with generator residuals at (x, p).
LagrangianPoint psi_map(const LagrangianModel& model, const MasterContext& ctx,
                        std::span<const Complex> u);

/// Psi images of the solver points. Throws ConsistencyError if a generator
/// residual exceeds tol * (1 + max|p| + max|a/p|).
std::vector<LagrangianPoint> fiber_points(const LagrangianModel& model, const MasterContext& ctx,
                                          const CriticalAlgebraModel& crit, double tol = 1e-9);

/// d_I^2 Jac_I = (-1)^(n-k) sum_{|M|=n-k} d_{M^c}^2 prod_{j in M} a_j / p_j^2.
/// Throws ValidationError if d_I = 0.
Complex jacobian_I(const LagrangianModel& model, const LagrangianPoint& point, const Subset& chart);

/// d_I^2 times the Jacobian determinant of the projection to x in the
/// (x_I, p_{I^c}) chart, by central differences with step `step`*min|p| and
/// one Richardson extrapolation.
Complex jacobian_I_numeric(const LagrangianModel& model, const LagrangianPoint& point,
                           const Subset& chart, double step = 1e-3);

/// (-1)^k sum_{|I|=k} d_I^2 prod_{i in I} p_i^2 / a_i.
Complex hessian_on_L(const LagrangianModel& model, const LagrangianPoint& point);

/// (-1)^n d_I^2 Jac_I prod_j p_j^2 / a_j; equals hessian_on_L.
Complex hessian_from_jacobian(const LagrangianModel& model, const LagrangianPoint& point,
                              const Subset& chart);

/// d_I^2 Jac from det dE/dp of the n defining equations at fixed x:
/// (-1)^(n-k) det[B; Lambda diag(a/p^2)] / c, c = det[B; Lambda] / sum_I d_I^2.
Complex system_jacobian(const LagrangianModel& model, const LagrangianPoint& point);

/// sum over fiber points of f g prod_j(a_j/p_j^2) (-1)^n / (d_I^2 Jac_system).
/// Throws NumericalError on a degenerate point.
Complex residue_form_L(const LagrangianModel& model, std::span<const LagrangianPoint> points,
                       std::span<const Complex> f, std::span<const Complex> g);

/// d_I prod_{i in I} p_i at every point, indexed like fc.top(); result[subset][point].
std::vector<std::vector<Complex>> marked_p_elements(const FlagComplex& fc,
                                                    const LagrangianModel& model,
                                                    std::span<const LagrangianPoint> points);

struct SpectrumMatch {
  std::vector<std::vector<Complex>> spectrum;  // joint eigen-tuples
  std::vector<std::vector<Complex>> images;    // Psi p-vectors
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (spectrum, image)
  double max_discrepancy = 0.0;
  double scale = 1.0;
  int attempts = 0;
};

/// Joint spectrum of the K_j(x) restricted to Sing. Diagonalizes a seeded
/// random rational combination (symmetrized through the Gram factor when
/// the restricted form is positive definite); retries up to five times if
/// the combination has a repeated eigenvalue or an eigenvector fails to be
/// common. Throws NumericalError after the last retry.
std::vector<std::vector<Complex>> char_variety_fiber(const OperatorFamily& ops,
                                                     const SingularSubspace& sing,
                                                     std::span<const Complex> x,
                                                     std::uint64_t seed, int* attempts = nullptr);

/// Greedy minimum-distance matching of joint eigen-tuples to p-vectors.
SpectrumMatch match_spectrum(std::vector<std::vector<Complex>> spectrum,
                             std::span<const LagrangianPoint> points);

}  // namespace critvar
