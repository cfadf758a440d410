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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "critvar/errors.hpp"
#include "critvar/os_flag.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace critvar;
using support::q;
using support::qs;

namespace {

RationalMatrix diag(const std::vector<Rational>& d) {
  RationalMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<fixtures::Fixture> random_families(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<fixtures::Fixture> out;
  for (int i = 0; i < count; ++i) out.push_back(fixtures::random_fixture(rng, 1 + i % 3, 4 + i % 3, i % 2 == 0, "r"));
  return out;
}

}  // namespace

TEST_CASE("standard vectors carry the sorting sign") {
  FlagComplex fc(support::load("fix3.json").family);
  CHECK(fc.standard_vector({0, 1}).coords == qs({"1", "0", "0"}));
  CHECK(fc.standard_vector({1, 0}).coords == qs({"-1", "0", "0"}));
  CHECK(fc.standard_vector({2, 0}).coords == qs({"0", "-1", "0"}));
  CHECK(fc.standard_vector({1, 1}).coords == qs({"0", "0", "0"}));
}

TEST_CASE("Aomoto differential on small fixtures") {
  auto f1 = support::load("fix1.json");
  FlagComplex fc1(f1.family);
  auto d1 = aomoto_differential(fc1, f1.weights, 1);
  REQUIRE(d1.rows() == 2);
  REQUIRE(d1.cols() == 1);
  CHECK(d1(0, 0) == 1);
  CHECK(d1(1, 0) == 1);

  auto f3 = support::load("fix3.json");
  FlagComplex fc3(f3.family);
  WeightVector a(qs({"2", "3", "5"}));
  auto d3 = aomoto_differential(fc3, a, 2);
  // column of (H_1): a_2 (H_1,H_2) + a_3 (H_1,H_3)
  CHECK(d3.column(0) == qs({"3", "5", "0"}));
  CHECK_THROWS(aomoto_differential(fc3, a, 0));
}

TEST_CASE("flag differential on small fixtures") {
  FlagComplex fc1(support::load("fix1.json").family);
  CHECK(flag_differential(fc1, 0).column(0) == qs({"1", "1"}));
  FlagComplex fc2(support::load("fix2.json").family);
  CHECK(flag_differential(fc2, 0).column(0) == qs({"1", "1", "1"}));
}

TEST_CASE("differentials square to zero and the form intertwines them") {
  for (const auto& fx : random_families(17, 18)) {
    auto in = fx.input();
    FlagComplex fc(in.family);
    const int k = fc.k();
    for (int p = 1; p + 1 <= k; ++p) {
      CHECK((aomoto_differential(fc, in.weights, p + 1) * aomoto_differential(fc, in.weights, p)).is_zero());
      CHECK((flag_differential(fc, p) * flag_differential(fc, p - 1)).is_zero());
    }
    for (int p = 1; p <= k; ++p) {
      auto lhs = aomoto_differential(fc, in.weights, p) * diag(contravariant_diagonal(fc, in.weights, p - 1));
      auto rhs = diag(contravariant_diagonal(fc, in.weights, p)) * flag_differential(fc, p - 1);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("contravariant form is diagonal in products of weights") {
  FlagComplex fc1(support::load("fix1.json").family);
  WeightVector ones(qs({"1", "1"}));
  CHECK(contravariant_diagonal(fc1, ones, 1) == qs({"1", "1"}));
  CHECK(contravariant_diagonal(fc1, ones, 0) == qs({"1"}));
  FlagComplex fc3(support::load("fix3.json").family);
  auto g = contravariant_gram(fc3, WeightVector(qs({"2", "3", "5"})), 2);
  CHECK(g(0, 0) == 6);
  CHECK(g(1, 1) == 10);
  CHECK(g(2, 2) == 15);
  CHECK(g(0, 1) == 0);
}

TEST_CASE("singular subspace of the fixtures") {
  auto f1 = support::load("fix1.json");
  FlagComplex fc1(f1.family);
  auto s1 = singular_subspace(fc1, f1.weights, -1);
  REQUIRE(s1.dim() == 1);
  auto v = s1.basis().column(0);
  CHECK(v[0] == -v[1]);
  CHECK(s1.gram()(0, 0) == 2 * v[0] * v[0]);

  auto f2 = support::load("fix2.json");
  FlagComplex fc2(f2.family);
  auto s2 = singular_subspace(fc2, f2.weights, -2);
  CHECK(s2.dim() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    auto col = s2.basis().column(c);
    CHECK(col[0] + col[1] + col[2] == 0);
  }
  auto f3 = support::load("fix3.json");
  CHECK(singular_subspace(FlagComplex(f3.family), f3.weights, 1).dim() == 1);
  CHECK_THROWS_AS(singular_subspace(fc1, f1.weights, 2), ConsistencyError);
}

TEST_CASE("dimension count: rank d + dim Sing = dim F^k") {
  for (const auto& fx : random_families(23, 12)) {
    auto in = fx.input();
    FlagComplex fc(in.family);
    const long chi = oracle::chi(fx.b);
    auto sing = singular_subspace(fc, in.weights, chi);
    CHECK(rank(flag_differential(fc, fc.k() - 1)) + sing.dim() == fc.top().size());
  }
}

TEST_CASE("orthogonal projection") {
  auto f1 = support::load("fix1.json");
  FlagComplex fc(f1.family);
  auto sing = singular_subspace(fc, f1.weights, -1);
  CHECK(orthogonal_projection(sing, FlagVector{1, qs({"1", "0"})}).coords == qs({"1/2", "-1/2"}));
  CHECK(orthogonal_projection(sing, FlagVector{1, qs({"1", "1"})}).coords == qs({"0", "0"}));

  for (const auto& fx : random_families(29, 10)) {
    auto in = fx.input();
    FlagComplex f(in.family);
    auto s = singular_subspace(f, in.weights, oracle::chi(fx.b));
    for (std::size_t c = 0; c < s.dim(); ++c) {
      FlagVector b{f.k(), s.basis().column(c)};
      CHECK(orthogonal_projection(s, b) == b);
    }
    // residual of a projection is orthogonal to Sing
    FlagVector e{f.k(), std::vector<Rational>(f.top().size())};
    e.coords[0] = 1;
    auto pr = orthogonal_projection(s, e);
    CHECK(s.contains(pr.coords));
    std::vector<Rational> r(e.coords.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = e.coords[i] - pr.coords[i];
    for (std::size_t c = 0; c < s.dim(); ++c) CHECK(contravariant_form(s.diagonal(), r, s.basis().column(c)) == 0);
  }
}

TEST_CASE("marked elements and their relations") {
  auto f1 = support::load("fix1.json");
  FlagComplex fc1(f1.family);
  auto m1 = marked_flag_elements(fc1, singular_subspace(fc1, f1.weights, -1));
  CHECK(m1[0].coords == qs({"1/2", "-1/2"}));
  CHECK(m1[1].coords == qs({"-1/2", "1/2"}));

  auto f2 = support::load("fix2.json");
  FlagComplex fc2(f2.family);
  auto m2 = marked_flag_elements(fc2, singular_subspace(fc2, f2.weights, -2));
  for (const auto& r : marked_flag_relations(fc2, m2)) CHECK(std::all_of(r.coords.begin(), r.coords.end(), [](const Rational& x) { return x == 0; }));

  auto f3 = support::load("fix3.json");
  FlagComplex fc3(f3.family);
  auto m3 = marked_flag_elements(fc3, singular_subspace(fc3, f3.weights, 1));
  auto swapped = marked_flag_element(fc3, m3, {1, 0}).coords;
  for (auto& x : swapped) x = -x;
  CHECK(swapped == m3[0].coords);
  CHECK(marked_flag_element(fc3, m3, {2, 2}).coords == qs({"0", "0", "0"}));
  for (const auto& r : marked_flag_relations(fc3, m3)) CHECK(std::all_of(r.coords.begin(), r.coords.end(), [](const Rational& x) { return x == 0; }));
}
