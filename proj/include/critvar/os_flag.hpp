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

#include <vector>

#include "critvar/arrangement.hpp"
#include "critvar/rational.hpp"
#include "critvar/subsets.hpp"

namespace critvar {

/// Element of OS^p in the standard basis (increasing independent p-tuples).
struct OSForm {
  int degree = 0;
  std::vector<Rational> coords;
};

/// Element of F^p in the dual standard basis F(H_{j_1},...,H_{j_p}).
struct FlagVector {
  int degree = 0;
  std::vector<Rational> coords;

  friend bool operator==(const FlagVector&, const FlagVector&) = default;
};

/// Standard bases of OS^p and F^p, p = 0..k, for a fiber with normal
/// crossings. The bases depend only on the matroid, not on x.
class FlagComplex {
 public:
  explicit FlagComplex(const ArrangementFamily& family, Execution exec = Execution::Serial);

  int k() const { return k_; }
  int n() const { return n_; }
  const SubsetIndex& basis(int p) const { return bases_.at(static_cast<std::size_t>(p)); }
  const SubsetIndex& top() const { return bases_.back(); }

  /// Coordinate vector of F(H_{j_1},...,H_{j_p}) for an arbitrary ordered
  /// tuple: sign of the sorting permutation, zero if dependent or repeated.
  FlagVector standard_vector(std::vector<int> tuple) const;

 private:
  int k_;
  int n_;
  std::vector<SubsetIndex> bases_;
};

/// Matrix of OS^{p-1} -> OS^p, x |-> x . omega^(a) (rows index OS^p).
RationalMatrix aomoto_differential(const FlagComplex& fc, const WeightVector& a, int p);

/// Matrix of d: F^p -> F^{p+1}, F(S) |-> sum_j F(S, j).
RationalMatrix flag_differential(const FlagComplex& fc, int p);

/// Diagonal of the contravariant form on F^p: a_{j_1}...a_{j_p}.
std::vector<Rational> contravariant_diagonal(const FlagComplex& fc, const WeightVector& a, int p);
RationalMatrix contravariant_gram(const FlagComplex& fc, const WeightVector& a, int p);

/// S^(a)(u, v) on F^p given the diagonal.
Rational contravariant_form(std::span<const Rational> diagonal, std::span<const Rational> u,
                            std::span<const Rational> v);

/// Sing_a F^k: the annihilator of the image of the top Aomoto differential.
class SingularSubspace {
 public:
  SingularSubspace(RationalMatrix basis, std::vector<std::size_t> free_rows,
                   std::vector<Rational> diagonal);

  std::size_t dim() const { return basis_.cols(); }
  std::size_t ambient_dim() const { return basis_.rows(); }
  /// Columns are basis vectors of Sing in the standard basis of F^k.
  const RationalMatrix& basis() const { return basis_; }
  const RationalMatrix& gram() const { return gram_; }
  const std::vector<Rational>& diagonal() const { return diagonal_; }
  /// Rows of the standard basis whose entries are the Sing coordinates.
  const std::vector<std::size_t>& free_rows() const { return free_rows_; }
  FlagVector basis_vector(std::size_t i) const;

  /// Coordinates in the Sing basis of a vector already known to lie in Sing.
  std::vector<Rational> coordinates(std::span<const Rational> v) const;
  bool contains(std::span<const Rational> v) const;

  /// S^(a)-orthogonal projection onto Sing via an exact Gram solve.
  FlagVector project(const FlagVector& f) const;

 private:
  RationalMatrix basis_;
  std::vector<std::size_t> free_rows_;
  std::vector<Rational> diagonal_;
  RationalMatrix gram_;
  RationalMatrix gram_inverse_;
};

/// Computes Sing_a F^k. Throws ConsistencyError if dim != |chi| (the weight is
/// then not unbalanced) or the restricted form is degenerate.
SingularSubspace singular_subspace(const FlagComplex& fc, const WeightVector& a, long chi);

FlagVector orthogonal_projection(const SingularSubspace& sing, const FlagVector& f);

/// Marked elements v_S = projection of F(S), indexed like fc.top().
std::vector<FlagVector> marked_flag_elements(const FlagComplex& fc, const SingularSubspace& sing);

/// v for an arbitrary ordered k-tuple, with skew-symmetry and zero for
/// dependent or repeated tuples.
FlagVector marked_flag_element(const FlagComplex& fc, std::span<const FlagVector> marked,
                               std::vector<int> tuple);

/// sum_j v_{j, i_2..i_k} for each independent (k-1)-subset {i_2..i_k}.
/// Exact; every entry of every returned vector must be zero.
std::vector<FlagVector> marked_flag_relations(const FlagComplex& fc,
                                              std::span<const FlagVector> marked);

}  // namespace critvar
