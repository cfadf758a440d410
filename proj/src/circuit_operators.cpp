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

#include "critvar/circuit_operators.hpp"

#include <algorithm>
#include <cmath>

#include "critvar/errors.hpp"

namespace critvar {

RationalMatrix l_c_matrix(const FlagComplex& fc, const WeightVector& a, const Circuit& c) {
  const auto& basis = fc.top();
  const auto& members = c.members;  // i_1 < ... < i_r
  const std::size_t r = members.size();
  RationalMatrix out(basis.size(), basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Subset& s = basis[col];
    Subset inter;
    std::set_intersection(s.begin(), s.end(), members.begin(), members.end(),
                          std::back_inserter(inter));
    if (inter.size() + 1 < r) continue;
    // S meets C in C_m = C - {i_m}; m is 1-based.
    std::size_t m = 0;
    while (m < r && std::binary_search(inter.begin(), inter.end(), members[m])) ++m;
    const int m1 = static_cast<int>(m) + 1;
    Subset rest;
    std::set_difference(s.begin(), s.end(), inter.begin(), inter.end(), std::back_inserter(rest));

    // F(S) = eps F(i_1..^i_m..i_r, s_1..); eps = sign of sorting that tuple.
    std::vector<int> tuple;
    for (std::size_t l = 0; l < r; ++l)
      if (l != m) tuple.push_back(members[l]);
    tuple.insert(tuple.end(), rest.begin(), rest.end());
    const int eps = sort_with_sign(tuple);

    for (std::size_t l = 0; l < r; ++l) {
      std::vector<int> image;
      for (std::size_t q = 0; q < r; ++q)
        if (q != l) image.push_back(members[q]);
      image.insert(image.end(), rest.begin(), rest.end());
      int sign = sort_with_sign(image);
      if (sign == 0) continue;
      auto row = basis.find(image);
      if (!row) continue;
      const int l1 = static_cast<int>(l) + 1;
      const int total = eps * sign * (((m1 + l1) % 2 == 0) ? 1 : -1);
      out(*row, col) += total * a[static_cast<std::size_t>(members[l])];
    }
  }
  return out;
}

RationalMatrix restrict_to_sing(const RationalMatrix& op, const SingularSubspace& sing) {
  RationalMatrix image = op * sing.basis();
  RationalMatrix block(sing.dim(), sing.dim());
  for (std::size_t c = 0; c < sing.dim(); ++c) {
    auto col = image.column(c);
    if (!sing.contains(col)) throw ConsistencyError("operator does not preserve Sing");
    block.set_column(c, sing.coordinates(col));
  }
  return block;
}

bool is_contravariant_symmetric(const RationalMatrix& op, std::span<const Rational> diagonal) {
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = i + 1; j < op.cols(); ++j)
      if (diagonal[i] * op(i, j) != diagonal[j] * op(j, i)) return false;
  return true;
}

Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_double(m(r, c));
  return out;
}

OperatorFamily::OperatorFamily(const FlagComplex& fc, const WeightVector& a,
                               std::vector<Circuit> circuits, const SingularSubspace& sing,
                               Execution exec)
    : n_(static_cast<std::size_t>(fc.n())), sing_dim_(sing.dim()), circuits_(std::move(circuits)),
      sing_(sing) {
  const std::size_t count = circuits_.size();
  l_c_.resize(count);
  l_c_restricted_.resize(count);
  const long total = static_cast<long>(count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < total; ++c) {
      auto i = static_cast<std::size_t>(c);
      l_c_[i] = l_c_matrix(fc, a, circuits_[i]);
      l_c_restricted_[i] = restrict_to_sing(l_c_[i], sing_);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      l_c_[i] = l_c_matrix(fc, a, circuits_[i]);
      l_c_restricted_[i] = restrict_to_sing(l_c_[i], sing_);
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    l_c_numeric_.push_back(to_eigen(l_c_[i]));
    l_c_restricted_numeric_.push_back(to_eigen(l_c_restricted_[i]));
  }
}

OperatorMatrix OperatorFamily::k_j(std::span<const Rational> x, int j) const {
  require_off_discriminant(circuits_, x);
  const std::size_t dim = l_c_.empty() ? 0 : l_c_.front().rows();
  RationalMatrix sum(dim, dim);
  RationalMatrix block(sing_dim_, sing_dim_);
  for (std::size_t c = 0; c < circuits_.size(); ++c) {
    const Rational& lambda = circuits_[c].lambda[static_cast<std::size_t>(j)];
    if (lambda == 0) continue;
    Rational coeff = lambda / circuits_[c].evaluate(x);
    sum = sum + coeff * l_c_[c];
    block = block + coeff * l_c_restricted_[c];
  }
  if (!(sing_.basis() * block == sum * sing_.basis()))
    throw ConsistencyError("K_j block inconsistent with the full operator");
  return OperatorMatrix{std::move(sum), std::move(block), "K_" + std::to_string(j + 1)};
}

RationalMatrix OperatorFamily::marked_multiplication(std::span<const Rational> x, int j) const {
  // L_C acts on the w's by the same signed circuit rule as on the standard flags.
  return k_j(x, j).matrix;
}

std::vector<Complex> OperatorFamily::inverse_circuit_values(std::span<const Complex> x) const {
  double scale = 1.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  std::vector<Complex> out;
  out.reserve(circuits_.size());
  for (const auto& c : circuits_) {
    Complex f = c.evaluate(x);
    if (std::abs(f) <= 1e-12 * scale)
      throw DiscriminantError("x too close to the discriminant: circuit " + format_subset(c.members));
    out.push_back(1.0 / f);
  }
  return out;
}

Eigen::MatrixXcd OperatorFamily::k_j_numeric(std::span<const Complex> x, int j) const {
  auto inv = inverse_circuit_values(x);
  const Eigen::Index dim = l_c_numeric_.empty() ? 0 : l_c_numeric_.front().rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t c = 0; c < circuits_.size(); ++c) {
    double lambda = to_double(circuits_[c].lambda[static_cast<std::size_t>(j)]);
    if (lambda != 0.0) sum += (lambda * inv[c]) * l_c_numeric_[c].cast<Complex>();
  }
  return sum;
}

Eigen::MatrixXcd OperatorFamily::k_j_restricted_numeric(std::span<const Complex> x, int j) const {
  auto inv = inverse_circuit_values(x);
  const auto dim = static_cast<Eigen::Index>(sing_dim_);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t c = 0; c < circuits_.size(); ++c) {
    double lambda = to_double(circuits_[c].lambda[static_cast<std::size_t>(j)]);
    if (lambda != 0.0) sum += (lambda * inv[c]) * l_c_restricted_numeric_[c].cast<Complex>();
  }
  return sum;
}

std::vector<Rational> OperatorFamily::derivative_coefficients(int i, int j) const {
  std::vector<Rational> out;
  out.reserve(circuits_.size());
  for (const auto& c : circuits_)
    out.push_back(-c.lambda[static_cast<std::size_t>(i)] * c.lambda[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace critvar
