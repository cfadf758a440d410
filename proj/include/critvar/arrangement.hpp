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
#include <string>
#include <string_view>
#include <vector>

#include "critvar/rational.hpp"
#include "critvar/subsets.hpp"

namespace critvar {

/// The family A(x): n affine hyperplanes g_j(t) + x_j = 0 in C^k with
/// g_j = sum_i b^i_j t_i. B is k x n; every column is nonzero and rank B = k.
class ArrangementFamily {
 public:
  explicit ArrangementFamily(RationalMatrix b, std::vector<std::string> labels = {});

  int k() const { return k_; }
  int n() const { return n_; }
  const RationalMatrix& b() const { return b_; }
  const Rational& coefficient(int i, int j) const {
    return b_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  double coefficient_d(int i, int j) const {
    return b_double_[static_cast<std::size_t>(i * n_ + j)];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  /// All k-subsets in lexicographic order, paired with their k x k minors d_I.
  const std::vector<Subset>& k_subsets() const { return k_subsets_; }
  const std::vector<Rational>& k_minors() const { return k_minors_; }

  /// d_I for a sorted k-subset.
  const Rational& minor(const Subset& subset) const;

  /// rank of the columns indexed by subset.
  std::size_t column_rank(const Subset& subset) const;

 private:
  int k_;
  int n_;
  RationalMatrix b_;
  std::vector<double> b_double_;
  std::vector<std::string> labels_;
  std::vector<Subset> k_subsets_;
  std::vector<Rational> k_minors_;
  SubsetIndex minor_index_;
};

/// Nonzero weights a_j; a_inf = -sum a_j is the weight of the hyperplane at infinity.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<Rational> values);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t j) const { return values_[j]; }
  const std::vector<Rational>& values() const { return values_; }
  Rational infinity() const;
  bool all_positive() const;
  std::vector<Complex> numeric() const { return to_complex(values_); }

 private:
  std::vector<Rational> values_;
};

/// Base point x in C^n (rational).
struct FiberPoint {
  std::vector<Rational> values;
  std::vector<Complex> numeric() const { return to_complex(values); }
};

/// Minimal dependent subset with its relation sum_j lambda_j b_j = 0.
/// lambda has length n, vanishes off members, first nonzero entry is 1.
struct Circuit {
  Subset members;
  std::vector<Rational> lambda;

  /// f_C(x) = sum_j lambda_j x_j.
  Rational evaluate(std::span<const Rational> x) const;
  Complex evaluate(std::span<const Complex> x) const;
};

struct ArrangementInput {
  ArrangementFamily family;
  WeightVector weights;
  FiberPoint fiber;
};

/// Parses and validates the JSON input document
/// {"k","n","B","weights","x","labels"?}; rationals are ints or "p/q" strings.
/// Throws ParseError or ValidationError.
ArrangementInput load_family(std::string_view document);

/// p-subsets whose columns have rank p, in lexicographic order.
std::vector<Subset> independent_subsets(const ArrangementFamily& family, int p,
                                        Execution exec = Execution::Serial);

/// All circuits, ordered lexicographically by member list.
std::vector<Circuit> circuits(const ArrangementFamily& family,
                              Execution exec = Execution::Serial);

struct DiscriminantReport {
  bool on = false;
  std::vector<Subset> violating;  // members of circuits with f_C(x) = 0
};

DiscriminantReport discriminant_membership(std::span<const Circuit> circuits,
                                           std::span<const Rational> x);

/// Numeric variant: a circuit is violated when |f_C(x)| <= tol.
DiscriminantReport discriminant_membership(std::span<const Circuit> circuits,
                                           std::span<const Complex> x, double tol);

/// Throws DiscriminantError naming the first violated circuit.
void require_off_discriminant(std::span<const Circuit> circuits, std::span<const Rational> x);

/// Euler characteristic of the complement of a normal-crossings fiber,
/// sum_p (-1)^p #independent p-subsets.
long euler_characteristic(const ArrangementFamily& family);

/// A dense edge of the projective closure. Index n stands for H_inf.
struct DenseEdge {
  Subset members;
  Rational weight;
};

struct UnbalanceReport {
  bool unbalanced = false;
  bool shortcut = false;  // decided by positivity without enumeration
  std::vector<DenseEdge> dense_edges;
};

inline constexpr int kDefaultEdgeEnumerationCap = 12;

/// Unbalancedness of (A(x), a): every dense edge of the projective closure
/// has nonzero weight. Positive real weights short-circuit to true.
/// Throws ValidationError when enumeration is needed and n > cap.
UnbalanceReport is_unbalanced(const ArrangementFamily& family, const WeightVector& a,
                              const FiberPoint& x, int cap = kDefaultEdgeEnumerationCap);

/// Circuit vectors of an arbitrary column matroid (shared with the
/// projective-closure computation). Serial and parallel paths agree exactly.
std::vector<Circuit> matroid_circuits(const RationalMatrix& columns, Execution exec);

std::vector<Subset> matroid_independent_subsets(const RationalMatrix& columns, int p,
                                                Execution exec);

}  // namespace critvar
