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

#include <random>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"
#include "json.hpp"
#include "oracle.hpp"

namespace fixtures {

struct Fixture {
  std::string name;
  oracle::IntMatrix b;
  std::vector<critvar::Rational> a;
  std::vector<critvar::Rational> x;

  critvar::ArrangementInput input() const {
    critvar::RationalMatrix m(b.size(), b[0].size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b[0].size(); ++j) m(i, j) = critvar::Rational(static_cast<long>(b[i][j]));
    return critvar::ArrangementInput{critvar::ArrangementFamily(m), critvar::WeightVector(a), critvar::FiberPoint{x}};
  }
  std::vector<double> a_double() const { return to_d(a); }
  std::vector<double> x_double() const { return to_d(x); }
  int k() const { return static_cast<int>(b.size()); }
  int n() const { return static_cast<int>(b[0].size()); }

 private:
  static std::vector<double> to_d(const std::vector<critvar::Rational>& v) {
    std::vector<double> out;
    for (const auto& q : v) out.push_back(q.get_d());
    return out;
  }
};

inline std::vector<critvar::Rational> ints(std::initializer_list<long> v) {
  std::vector<critvar::Rational> out;
  for (long q : v) out.emplace_back(q);
  return out;
}

inline Fixture fix1() { return {"FIX-1", {{1, 1}}, ints({1, 1}), ints({0, -1})}; }
inline Fixture fix2() { return {"FIX-2", {{1, 1, 1}}, ints({1, 1, 1}), ints({0, -1, -2})}; }
inline Fixture fix3() { return {"FIX-3", {{1, 0, 1}, {0, 1, 1}}, ints({1, 1, 1}), ints({0, 0, -1})}; }

/// Random fixture: B entries in [-3, 3] with nonzero columns, rank k and no
/// coloops (every column lies on a circuit); positive or mixed-sign weights
/// m/q; x = m/q off the discriminant. Mixed-sign draws are kept only if the
/// weight is unbalanced.
inline Fixture random_fixture(std::mt19937_64& rng, int k, int n, bool positive, const std::string& name) {
  std::uniform_int_distribution<int> entry(-3, 3), num(1, 9), den(1, 4), xnum(-12, 12), sign(0, 1);
  for (;;) {
    Fixture f;
    f.name = name;
    f.b.assign(static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(n)));
    for (auto& row : f.b)
      for (auto& v : row) v = entry(rng);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = oracle::rank_of(f.b, {j}) == 1;
    if (!ok) continue;
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
    if (oracle::rank_of(f.b, all) != k) continue;
    auto circ = oracle::circuits(f.b);
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (const auto& c : circ)
      for (int j : c) covered[static_cast<std::size_t>(j)] = true;
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) continue;

    for (int j = 0; j < n; ++j) {
      critvar::Rational w(num(rng), den(rng));
      w.canonicalize();
      if (!positive && sign(rng)) w = -w;
      f.a.push_back(w);
      critvar::Rational xv(xnum(rng), den(rng));
      xv.canonicalize();
      f.x.push_back(xv);
    }
    auto in = f.input();
    auto cs = critvar::circuits(in.family);
    if (critvar::discriminant_membership(cs, in.fiber.values).on) continue;
    if (!positive) {
      auto rep = critvar::is_unbalanced(in.family, in.weights, in.fiber);
      if (!rep.unbalanced) continue;
    }
    return f;
  }
}

/// The randomized suite: 100 positive-weight fixtures over k = 1, 2, 3.
inline std::vector<Fixture> positive_suite(std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<Fixture> out;
  struct Shape { int k, n, count; };
  for (auto [k, n, count] : {Shape{1, 3, 8}, Shape{1, 5, 8}, Shape{1, 7, 9}, Shape{2, 4, 15}, Shape{2, 5, 15},
                             Shape{2, 6, 15}, Shape{3, 5, 15}, Shape{3, 6, 15}})
    for (int i = 0; i < count; ++i)
      out.push_back(random_fixture(rng, k, n, true,
                                   "pos-k" + std::to_string(k) + "n" + std::to_string(n) + "-" + std::to_string(i)));
  return out;
}

/// Mixed-sign unbalanced fixtures, solved by multistart.
inline std::vector<Fixture> mixed_suite(std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  std::vector<Fixture> out;
  struct Shape { int k, n, count; };
  for (auto [k, n, count] : {Shape{1, 4, 5}, Shape{2, 4, 6}, Shape{2, 5, 6}, Shape{3, 5, 3}})
    for (int i = 0; i < count; ++i)
      out.push_back(random_fixture(rng, k, n, false,
                                   "mix-k" + std::to_string(k) + "n" + std::to_string(n) + "-" + std::to_string(i)));
  return out;
}

}  // namespace fixtures
