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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"
#include "critvar/os_flag.hpp"

namespace critvar {

/// Exact operator on F^k (standard basis) with its block on Sing when the
/// weight is unbalanced.
struct OperatorMatrix {
  RationalMatrix matrix;
  std::optional<RationalMatrix> restricted;
  std::string provenance;
};

/// Matrix of L_C on the standard basis of F^k.
RationalMatrix l_c_matrix(const FlagComplex& fc, const WeightVector& a, const Circuit& c);

/// Block of op on the Sing basis. Throws ConsistencyError if op does not
/// map Sing into itself.
RationalMatrix restrict_to_sing(const RationalMatrix& op, const SingularSubspace& sing);

/// S^(a)(op v, w) = S^(a)(v, op w) for all v, w, i.e. diag(a) op is symmetric.
bool is_contravariant_symmetric(const RationalMatrix& op, std::span<const Rational> diagonal);

/// The Gauss-Manin coefficients K_j(x) = sum_C (lambda^C_j / f_C(x)) L_C,
/// assembled from per-circuit L_C blocks computed once.
class OperatorFamily {
 public:
  OperatorFamily(const FlagComplex& fc, const WeightVector& a, std::vector<Circuit> circuits,
                 const SingularSubspace& sing, Execution exec = Execution::Serial);

  std::size_t n() const { return n_; }
  std::size_t sing_dim() const { return sing_dim_; }
  const std::vector<Circuit>& circuits() const { return circuits_; }
  const RationalMatrix& l_c(std::size_t c) const { return l_c_[c]; }
  const RationalMatrix& l_c_restricted(std::size_t c) const { return l_c_restricted_[c]; }

  /// Exact K_j(x) and its Sing block. Throws DiscriminantError if some f_C(x) = 0.
  OperatorMatrix k_j(std::span<const Rational> x, int j) const;

  /// Action of K_j(x) on the marked spanning set {w_S} of the critical-set
  /// algebra: column S holds the coefficients of K_j(x) w_S over the w_T.
  RationalMatrix marked_multiplication(std::span<const Rational> x, int j) const;

  /// Numeric K_j(x) on F^k and on Sing. Throws DiscriminantError when
  /// |f_C(x)| <= 1e-12 max(1, |x|).
  Eigen::MatrixXcd k_j_numeric(std::span<const Complex> x, int j) const;
  Eigen::MatrixXcd k_j_restricted_numeric(std::span<const Complex> x, int j) const;

  /// Coefficients c_C with dK_i/dz_j = sum_C c_C f_C^{-2} L_C.
  std::vector<Rational> derivative_coefficients(int i, int j) const;

 private:
  std::vector<Complex> inverse_circuit_values(std::span<const Complex> x) const;

  std::size_t n_;
  std::size_t sing_dim_;
  std::vector<Circuit> circuits_;
  std::vector<RationalMatrix> l_c_;
  std::vector<RationalMatrix> l_c_restricted_;
  std::vector<Eigen::MatrixXd> l_c_numeric_;
  std::vector<Eigen::MatrixXd> l_c_restricted_numeric_;
  SingularSubspace sing_;
};

Eigen::MatrixXd to_eigen(const RationalMatrix& m);

}  // namespace critvar
