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

#include "critvar/circuit_operators.hpp"
#include "critvar/critical_solver.hpp"
#include "critvar/errors.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace critvar;
using support::q;
using support::qs;

namespace {

struct Ops {
  ArrangementInput in;
  FlagComplex fc;
  SingularSubspace sing;
  OperatorFamily ops;
};

Ops make(const ArrangementInput& in) {
  FlagComplex fc(in.family);
  auto sing = singular_subspace(fc, in.weights, euler_characteristic(in.family));
  OperatorFamily ops(fc, in.weights, circuits(in.family), sing);
  return Ops{in, fc, sing, ops};
}

RationalMatrix from_rows(std::initializer_list<std::initializer_list<const char*>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (const char* v : row) m(r, c++) = q(v);
    ++r;
  }
  return m;
}

}  // namespace

TEST_CASE("L_C on the two-point fixture") {
  auto o = make(support::load("fix1.json"));
  CHECK(o.ops.l_c(0) == from_rows({{"1", "-1"}, {"-1", "1"}}));
  CHECK(o.ops.l_c(0).apply(qs({"1", "1"})) == qs({"0", "0"}));
}

TEST_CASE("L_C vanishes on flags meeting the circuit in too few hyperplanes") {
  // k = 2, circuit {1,2,3}; the flag (H_4, H_5) shares nothing with it.
  auto in = load_family(R"({"k":2,"n":5,"B":[[1,0,1,1,0],[0,1,1,0,1]],"weights":[1,1,1,1,1],"x":[0,0,-1,3,5]})");
  FlagComplex fc(in.family);
  auto cs = circuits(in.family);
  auto c = std::find_if(cs.begin(), cs.end(), [](const Circuit& x) { return x.members == Subset{0, 1, 2}; });
  REQUIRE(c != cs.end());
  auto l = l_c_matrix(fc, in.weights, *c);
  auto pos = fc.top().find({3, 4});
  REQUIRE(pos);
  for (std::size_t r = 0; r < l.rows(); ++r) CHECK(l(r, *pos) == 0);
}

TEST_CASE("L_C agrees with the brute-force ordering rule") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 24; ++trial) {
    const int k = 1 + trial % 2;
    auto fx = fixtures::random_fixture(rng, k, k + 2 + trial % 2, trial % 3 != 0, "r");
    auto in = fx.input();
    FlagComplex fc(in.family);
    for (const auto& c : circuits(in.family)) {
      bool consistent = true;
      auto ref = oracle::l_c(fx.b, fx.a_double(), c.members, consistent);
      CHECK(consistent);
      auto mine = to_eigen(l_c_matrix(fc, in.weights, c));
      for (std::size_t r = 0; r < ref.size(); ++r)
        for (std::size_t s = 0; s < ref.size(); ++s)
          CHECK(mine(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) == doctest::Approx(ref[r][s]));
    }
  }
}

TEST_CASE("K_j on the small fixtures") {
  auto o1 = make(support::load("fix1.json"));
  auto k1 = o1.ops.k_j(o1.in.fiber.values, 0);
  CHECK(k1.matrix == from_rows({{"1", "-1"}, {"-1", "1"}}));
  REQUIRE(k1.restricted);
  CHECK((*k1.restricted)(0, 0) == 2);
  auto k2 = o1.ops.k_j(o1.in.fiber.values, 1);
  CHECK(k2.matrix == q("-1") * o1.ops.l_c(0));
  CHECK((*k2.restricted)(0, 0) == -2);

  auto o2 = make(support::load("fix2.json"));
  auto k = o2.ops.k_j(o2.in.fiber.values, 0).matrix;
  CHECK(k == o2.ops.l_c(0) + q("1/2") * o2.ops.l_c(1));
}

TEST_CASE("K_j rejects x on the discriminant") {
  auto o = make(support::load("fix1.json"));
  CHECK_THROWS_AS(o.ops.k_j(qs({"3", "3"}), 0), DiscriminantError);
  std::vector<Complex> near{3.0, 3.0 + 1e-14};
  CHECK_THROWS_AS(o.ops.k_j_numeric(near, 0), DiscriminantError);
}

TEST_CASE("symmetry, preservation and commutation on random families") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const int k = 1 + trial % 3;
    auto fx = fixtures::random_fixture(rng, k, k + 2 + trial % 2, true, "r");
    auto o = make(fx.input());
    std::vector<OperatorMatrix> ks;
    for (int j = 0; j < fx.n(); ++j) ks.push_back(o.ops.k_j(o.in.fiber.values, j));
    for (const auto& m : ks) {
      CHECK(is_contravariant_symmetric(m.matrix, o.sing.diagonal()));
      for (std::size_t c = 0; c < o.sing.dim(); ++c) CHECK(o.sing.contains(m.matrix.apply(o.sing.basis().column(c))));
    }
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t j = i + 1; j < ks.size(); ++j)
        CHECK((*ks[i].restricted * *ks[j].restricted - *ks[j].restricted * *ks[i].restricted).is_zero());
    // numeric path matches the exact one
    auto xn = o.in.fiber.numeric();
    for (int j = 0; j < fx.n(); ++j)
      CHECK((o.ops.k_j_numeric(xn, j) - to_eigen(ks[static_cast<std::size_t>(j)].matrix).cast<Complex>()).norm() <
            1e-10 * (1 + to_eigen(ks[static_cast<std::size_t>(j)].matrix).norm()));
  }
}

TEST_CASE("sum_j K_j vanishes when every lambda sums to zero") {
  // sum_j K_j = sum_C (sum_j lambda_j) / f_C(x) L_C
  auto o = make(support::load("fix2.json"));
  RationalMatrix total(o.fc.top().size(), o.fc.top().size());
  for (int j = 0; j < 3; ++j) total = total + o.ops.k_j(o.in.fiber.values, j).matrix;
  CHECK(total.is_zero());
}

TEST_CASE("eigenvalues on Sing are a_j / f_j at the critical points") {
  auto in = support::load("fix2.json");
  auto o = make(in);
  MasterContext ctx(in.family, in.weights, in.fiber);
  auto crit = solve_critical(ctx);
  auto kn = o.ops.k_j_restricted_numeric(ctx.x(), 0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(kn);
  std::vector<double> eig{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
  std::vector<double> expect;
  for (const auto& p : crit.points) expect.push_back(p.lagrangian_image[0].real());
  std::sort(eig.begin(), eig.end());
  std::sort(expect.begin(), expect.end());
  CHECK(eig[0] == doctest::Approx(expect[0]).epsilon(1e-10));
  CHECK(eig[1] == doctest::Approx(expect[1]).epsilon(1e-10));
}

TEST_CASE("the connection is closed: dK_i/dz_j = dK_j/dz_i") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    auto fx = fixtures::random_fixture(rng, 1 + trial % 2, 4, true, "r");
    auto o = make(fx.input());
    for (int i = 0; i < fx.n(); ++i)
      for (int j = 0; j < fx.n(); ++j) CHECK(o.ops.derivative_coefficients(i, j) == o.ops.derivative_coefficients(j, i));
    // compare one coefficient set with a difference quotient
    auto x = o.in.fiber.numeric();
    const double h = 1e-6;
    auto xp = x, xm = x;
    xp[1] += h;
    xm[1] -= h;
    Eigen::MatrixXcd fd = (o.ops.k_j_numeric(xp, 0) - o.ops.k_j_numeric(xm, 0)) / (2 * h);
    Eigen::MatrixXcd exact = Eigen::MatrixXcd::Zero(fd.rows(), fd.cols());
    auto coeff = o.ops.derivative_coefficients(0, 1);
    for (std::size_t c = 0; c < coeff.size(); ++c) {
      Complex f = o.ops.circuits()[c].evaluate(std::span<const Complex>(x));
      exact += to_double(coeff[c]) / (f * f) * to_eigen(o.ops.l_c(c)).cast<Complex>();
    }
    CHECK((fd - exact).norm() <= 1e-6 * (1 + exact.norm()));
  }
}

TEST_CASE("marked multiplication matches pointwise multiplication") {
  for (const char* name : {"fix1.json", "fix2.json", "fix3.json"}) {
    auto in = support::load(name);
    auto o = make(in);
    MasterContext ctx(in.family, in.weights, in.fiber);
    auto crit = solve_critical(ctx);
    auto w = marked_w_elements(ctx, o.fc, crit);
    for (int j = 0; j < in.family.n(); ++j) {
      auto m = to_eigen(o.ops.marked_multiplication(in.fiber.values, j));
      for (std::size_t p = 0; p < crit.points.size(); ++p) {
        const Complex pj = crit.points[p].lagrangian_image[static_cast<std::size_t>(j)];
        for (std::size_t s = 0; s < w.size(); ++s) {
          Complex rhs = 0;
          for (std::size_t t = 0; t < w.size(); ++t) rhs += m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) * w[t][p];
          CHECK(std::abs(pj * w[s][p] - rhs) <= 1e-10 * (1 + std::abs(rhs)));
        }
      }
    }
  }
}
