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

#include "critvar/os_flag.hpp"

#include <cstdlib>

#include "critvar/errors.hpp"

namespace critvar {

FlagComplex::FlagComplex(const ArrangementFamily& family, Execution exec)
    : k_(family.k()), n_(family.n()) {
  for (int p = 0; p <= k_; ++p) bases_.emplace_back(independent_subsets(family, p, exec));
}

FlagVector FlagComplex::standard_vector(std::vector<int> tuple) const {
  const int p = static_cast<int>(tuple.size());
  FlagVector out{p, std::vector<Rational>(basis(p).size())};
  int sign = sort_with_sign(tuple);
  if (sign == 0) return out;
  if (auto pos = basis(p).find(tuple)) out.coords[*pos] = sign;
  return out;
}

namespace {

// Sign of (S, j) against sorted order: j passes the members larger than it.
int append_sign(const Subset& s, int j) {
  int larger = 0;
  for (int v : s) {
    if (v == j) return 0;
    if (v > j) ++larger;
  }
  return larger % 2 == 0 ? 1 : -1;
}

}  // namespace

RationalMatrix aomoto_differential(const FlagComplex& fc, const WeightVector& a, int p) {
  if (p < 1 || p > fc.k()) throw std::out_of_range("aomoto_differential: need 1 <= p <= k");
  const auto& src = fc.basis(p - 1);
  const auto& dst = fc.basis(p);
  RationalMatrix d(dst.size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    for (int j = 0; j < fc.n(); ++j) {
      int sign = append_sign(src[c], j);
      if (sign == 0) continue;
      auto row = dst.find(insert_index(src[c], j));
      if (!row) continue;  // dependent: the monomial vanishes
      d(*row, c) += sign * a[static_cast<std::size_t>(j)];
    }
  }
  return d;
}

RationalMatrix flag_differential(const FlagComplex& fc, int p) {
  if (p < 0 || p >= fc.k()) throw std::out_of_range("flag_differential: need 0 <= p < k");
  const auto& src = fc.basis(p);
  const auto& dst = fc.basis(p + 1);
  RationalMatrix d(dst.size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    for (int j = 0; j < fc.n(); ++j) {
      int sign = append_sign(src[c], j);
      if (sign == 0) continue;
      if (auto row = dst.find(insert_index(src[c], j))) d(*row, c) += sign;
    }
  }
  return d;
}

std::vector<Rational> contravariant_diagonal(const FlagComplex& fc, const WeightVector& a, int p) {
  const auto& basis = fc.basis(p);
  std::vector<Rational> diag(basis.size(), Rational(1));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (int j : basis[i]) diag[i] *= a[static_cast<std::size_t>(j)];
  return diag;
}

RationalMatrix contravariant_gram(const FlagComplex& fc, const WeightVector& a, int p) {
  auto diag = contravariant_diagonal(fc, a, p);
  RationalMatrix g(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) g(i, i) = diag[i];
  return g;
}

Rational contravariant_form(std::span<const Rational> diagonal, std::span<const Rational> u,
                            std::span<const Rational> v) {
  Rational s = 0;
  for (std::size_t i = 0; i < diagonal.size(); ++i)
    if (u[i] != 0 && v[i] != 0) s += diagonal[i] * u[i] * v[i];
  return s;
}

SingularSubspace::SingularSubspace(RationalMatrix basis, std::vector<std::size_t> free_rows,
                                   std::vector<Rational> diagonal)
    : basis_(std::move(basis)), free_rows_(std::move(free_rows)), diagonal_(std::move(diagonal)) {
  const std::size_t m = basis_.cols();
  gram_ = RationalMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    auto bi = basis_.column(i);
    for (std::size_t j = i; j < m; ++j) {
      auto bj = basis_.column(j);
      gram_(i, j) = contravariant_form(diagonal_, bi, bj);
      gram_(j, i) = gram_(i, j);
    }
  }
  try {
    gram_inverse_ = solve(gram_, RationalMatrix::identity(m));
  } catch (const std::domain_error&) {
    throw ConsistencyError("contravariant form is degenerate on Sing");
  }
}

FlagVector SingularSubspace::basis_vector(std::size_t i) const {
  return FlagVector{0, basis_.column(i)};
}

std::vector<Rational> SingularSubspace::coordinates(std::span<const Rational> v) const {
  std::vector<Rational> c;
  c.reserve(free_rows_.size());
  for (auto r : free_rows_) c.push_back(v[r]);
  return c;
}

bool SingularSubspace::contains(std::span<const Rational> v) const {
  auto c = coordinates(v);
  auto back = basis_.apply(c);
  for (std::size_t i = 0; i < back.size(); ++i)
    if (back[i] != v[i]) return false;
  return true;
}

FlagVector SingularSubspace::project(const FlagVector& f) const {
  const std::size_t m = dim();
  std::vector<Rational> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = contravariant_form(diagonal_, basis_.column(i), f.coords);
  auto coeffs = gram_inverse_.apply(rhs);
  return FlagVector{f.degree, basis_.apply(coeffs)};
}

SingularSubspace singular_subspace(const FlagComplex& fc, const WeightVector& a, long chi) {
  const int k = fc.k();
  RationalMatrix d = aomoto_differential(fc, a, k);
  Kernel ker = nullspace(d.transpose());
  if (ker.basis.size() != static_cast<std::size_t>(std::labs(chi)))
    throw ConsistencyError("dim Sing = " + std::to_string(ker.basis.size()) +
                           " differs from |chi| = " + std::to_string(std::labs(chi)) +
                           " (weight not unbalanced?)");
  RationalMatrix basis(fc.top().size(), ker.basis.size());
  for (std::size_t c = 0; c < ker.basis.size(); ++c) basis.set_column(c, ker.basis[c]);
  return SingularSubspace(std::move(basis), ker.free_columns, contravariant_diagonal(fc, a, k));
}

FlagVector orthogonal_projection(const SingularSubspace& sing, const FlagVector& f) {
  return sing.project(f);
}

std::vector<FlagVector> marked_flag_elements(const FlagComplex& fc, const SingularSubspace& sing) {
  std::vector<FlagVector> out;
  out.reserve(fc.top().size());
  for (std::size_t i = 0; i < fc.top().size(); ++i) {
    FlagVector e{fc.k(), std::vector<Rational>(fc.top().size())};
    e.coords[i] = 1;
    out.push_back(sing.project(e));
    out.back().degree = fc.k();
  }
  return out;
}

FlagVector marked_flag_element(const FlagComplex& fc, std::span<const FlagVector> marked,
                               std::vector<int> tuple) {
  FlagVector out{fc.k(), std::vector<Rational>(fc.top().size())};
  int sign = sort_with_sign(tuple);
  if (sign == 0) return out;
  auto pos = fc.top().find(tuple);
  if (!pos) return out;
  out.coords = marked[*pos].coords;
  if (sign < 0)
    for (auto& q : out.coords) q = -q;
  return out;
}

std::vector<FlagVector> marked_flag_relations(const FlagComplex& fc,
                                              std::span<const FlagVector> marked) {
  std::vector<FlagVector> out;
  const auto& labels = fc.basis(fc.k() - 1);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    FlagVector sum{fc.k(), std::vector<Rational>(fc.top().size())};
    for (int j = 0; j < fc.n(); ++j) {
      std::vector<int> tuple{j};
      tuple.insert(tuple.end(), labels[l].begin(), labels[l].end());
      auto v = marked_flag_element(fc, marked, tuple);
      for (std::size_t i = 0; i < sum.coords.size(); ++i) sum.coords[i] += v.coords[i];
    }
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace critvar
