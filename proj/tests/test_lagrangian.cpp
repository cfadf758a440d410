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
#include "critvar/lagrangian.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace critvar;

namespace {

struct Setup {
  ArrangementInput in;
  MasterContext ctx;
  LagrangianModel model;
  CriticalAlgebraModel crit;
  std::vector<LagrangianPoint> fiber;
};

Setup setup(const ArrangementInput& in) {
  MasterContext ctx(in.family, in.weights, in.fiber);
  LagrangianModel model(in.family, in.weights, ctx.circuits());
  auto crit = solve_critical(ctx);
  auto fiber = fiber_points(model, ctx, crit);
  return Setup{in, std::move(ctx), std::move(model), std::move(crit), std::move(fiber)};
}

Complex c(double re) { return {re, 0.0}; }

}  // namespace

TEST_CASE("Laurent arithmetic and derivatives") {
  auto x = LaurentPolynomial::q(2, 0) * LaurentPolynomial::p(2, 1, -2, 3);
  CHECK(x.derivative_q(0).to_string() == LaurentPolynomial::p(2, 1, -2, 3).to_string());
  CHECK(x.derivative_p(1).to_string() == (LaurentPolynomial::q(2, 0) * LaurentPolynomial::p(2, 1, -3, -6)).to_string());
  CHECK((x - x).is_zero());
  std::vector<Complex> q{2.0, 0.0}, p{1.0, 0.5};
  CHECK(x.evaluate(q, p).real() == doctest::Approx(24.0));
}

TEST_CASE("canonical brackets") {
  auto q0 = LaurentPolynomial::q(2, 0), p0 = LaurentPolynomial::p(2, 0, 1), p1 = LaurentPolynomial::p(2, 1, 1);
  auto one = poisson_bracket(q0, p0);
  REQUIRE(one.terms().size() == 1);
  CHECK(one.terms().begin()->second == 1);
  CHECK(poisson_bracket(p0, q0).terms().begin()->second == -1);
  CHECK(poisson_bracket(q0, p1).is_zero());
  CHECK_THROWS_AS(poisson_bracket(q0, LaurentPolynomial::q(3, 0)), ValidationError);
}

TEST_CASE("generators of the two-point and triangle fixtures") {
  auto s1 = setup(support::load("fix1.json"));
  auto g1 = s1.model.generators();
  REQUIRE(g1.size() == 2);
  const int n = 2;
  auto F = LaurentPolynomial::p(n, 0, 1) + LaurentPolynomial::p(n, 1, 1);
  auto G = LaurentPolynomial::q(n, 0) - LaurentPolynomial::q(n, 1) - LaurentPolynomial::p(n, 0, -1) +
           LaurentPolynomial::p(n, 1, -1);
  CHECK((g1[0] - F).is_zero());
  CHECK((g1[1] - G).is_zero());

  auto s3 = setup(support::load("fix3.json"));
  auto g3 = s3.model.generators();
  REQUIRE(g3.size() == 3);
  const int m = 3;
  CHECK((g3[0] - (LaurentPolynomial::p(m, 0, 1) + LaurentPolynomial::p(m, 2, 1))).is_zero());
  CHECK((g3[1] - (LaurentPolynomial::p(m, 1, 1) + LaurentPolynomial::p(m, 2, 1))).is_zero());
  auto G3 = LaurentPolynomial::q(m, 0) + LaurentPolynomial::q(m, 1) - LaurentPolynomial::q(m, 2) -
            LaurentPolynomial::p(m, 0, -1) - LaurentPolynomial::p(m, 1, -1) + LaurentPolynomial::p(m, 2, -1);
  CHECK((g3[2] - G3).is_zero());
}

TEST_CASE("generators are in involution on random families") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    auto fx = fixtures::random_fixture(rng, 1 + trial % 3, 5 + trial % 2, trial % 2 == 0, "r");
    auto in = fx.input();
    LagrangianModel model(in.family, in.weights, circuits(in.family));
    auto gens = model.generators();
    CHECK(gens.size() == static_cast<std::size_t>(fx.n()));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) CHECK(poisson_bracket(gens[i], gens[j]).is_zero());
  }
}

TEST_CASE("a coordinate vector in Y is rejected") {
  auto in = load_family(R"({"k":2,"n":3,"B":[[1,0,0],[0,1,1]],"weights":[1,1,1],"x":[0,0,1]})");
  CHECK_THROWS_WITH_AS(LagrangianModel(in.family, in.weights, circuits(in.family)),
                       doctest::Contains("lies in Y"), ValidationError);
}

TEST_CASE("the Psi map on the fixtures") {
  auto s1 = setup(support::load("fix1.json"));
  std::vector<Complex> half{0.5};
  auto lp = psi_map(s1.model, s1.ctx, half);
  CHECK(support::dist(lp.p, {c(2), c(-2)}) < 1e-15);
  CHECK(lp.residual < 1e-15);

  auto s3 = setup(support::load("fix3.json"));
  REQUIRE(s3.fiber.size() == 1);
  CHECK(support::dist(s3.fiber[0].p, {c(3), c(3), c(-3)}) < 1e-12);

  auto s2 = setup(support::load("fix2.json"));
  REQUIRE(s2.fiber.size() == 2);
  for (const auto& pt : s2.fiber) {
    const Complex u = 1.0 / pt.p[0];
    CHECK(std::abs(pt.p[1] - 1.0 / (u - 1.0)) < 1e-12);
    CHECK(std::abs(pt.p[2] - 1.0 / (u - 2.0)) < 1e-12);
  }
  CHECK(support::dist(s2.fiber[0].p, s2.fiber[1].p) > 0.1);
}

TEST_CASE("Jacobian, Hessian and charts") {
  auto s1 = setup(support::load("fix1.json"));
  const auto& pt = s1.fiber[0];
  CHECK(jacobian_I(s1.model, pt, {0}).real() == doctest::Approx(-0.5));
  CHECK(hessian_on_L(s1.model, pt).real() == doctest::Approx(-8.0));
  CHECK(hessian_from_jacobian(s1.model, pt, {0}).real() == doctest::Approx(-8.0));
  CHECK(system_jacobian(s1.model, pt).real() == doctest::Approx(-0.5));

  auto s3 = setup(support::load("fix3.json"));
  const auto& p3 = s3.fiber[0];
  CHECK(hessian_on_L(s3.model, p3).real() == doctest::Approx(243.0));
  const Complex j12 = jacobian_I(s3.model, p3, {0, 1});
  CHECK(std::abs(jacobian_I(s3.model, p3, {0, 2}) - j12) < 1e-12);
  for (const Subset& chart : {Subset{0, 1}, Subset{0, 2}, Subset{1, 2}})
    CHECK(std::abs(jacobian_I_numeric(s3.model, p3, chart) - j12) < 1e-8 * std::abs(j12));
}

TEST_CASE("numeric charts agree on random families") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    auto fx = fixtures::random_fixture(rng, 1 + trial % 3, 5, true, "r");
    auto s = setup(fx.input());
    for (const auto& pt : s.fiber) {
      const Complex ref = hessian_on_L(s.model, pt);
      for (const auto& chart : s.in.family.k_subsets()) {
        if (s.in.family.minor(chart) == 0) {
          CHECK_THROWS_AS(jacobian_I(s.model, pt, chart), ValidationError);
          continue;
        }
        CHECK(std::abs(hessian_from_jacobian(s.model, pt, chart) - ref) < 1e-8 * std::abs(ref));
        const Complex j = jacobian_I(s.model, pt, chart);
        CHECK(std::abs(jacobian_I_numeric(s.model, pt, chart) - j) < 1e-6 * std::abs(j));
      }
    }
  }
}

TEST_CASE("residue pairing on L matches the one on the critical set") {
  auto s1 = setup(support::load("fix1.json"));
  std::vector<Complex> ones{1.0};
  CHECK(residue_form_L(s1.model, s1.fiber, ones, ones).real() == doctest::Approx(-0.125));

  auto s2 = setup(support::load("fix2.json"));
  std::vector<Complex> ones2{1.0, 1.0};
  CHECK(std::abs(residue_form_L(s2.model, s2.fiber, ones2, ones2) - residue_form(s2.crit, ones2, ones2)) < 1e-14);
  for (int j = 0; j < 3; ++j) {
    std::vector<Complex> pj, cj;
    for (std::size_t q = 0; q < 2; ++q) {
      pj.push_back(s2.fiber[q].p[static_cast<std::size_t>(j)]);
      cj.push_back(s2.crit.points[q].lagrangian_image[static_cast<std::size_t>(j)]);
    }
    CHECK(std::abs(residue_form_L(s2.model, s2.fiber, pj, ones2) - residue_form(s2.crit, cj, ones2)) < 1e-13);
  }
}

TEST_CASE("marked p elements") {
  auto s3 = setup(support::load("fix3.json"));
  FlagComplex fc(s3.in.family);
  auto p = marked_p_elements(fc, s3.model, s3.fiber);
  CHECK(std::abs(p[0][0] - c(9)) < 1e-12);
  CHECK(std::abs(p[1][0] - c(-9)) < 1e-12);
  CHECK(std::abs(p[2][0] - c(9)) < 1e-12);
  CHECK(marked_w_relation_residual(fc, p) < 1e-14);

  auto s1 = setup(support::load("fix1.json"));
  auto p1 = marked_p_elements(FlagComplex(s1.in.family), s1.model, s1.fiber);
  CHECK(std::abs(p1[0][0] - c(2)) < 1e-14);
  CHECK(std::abs(p1[1][0] - c(-2)) < 1e-14);
}

TEST_CASE("joint spectrum matches the fiber") {
  for (const char* name : {"fix1.json", "fix2.json", "fix3.json"}) {
    auto s = setup(support::load(name));
    FlagComplex fc(s.in.family);
    auto sing = singular_subspace(fc, s.in.weights, s.ctx.chi());
    OperatorFamily ops(fc, s.in.weights, s.ctx.circuits(), sing);
    int attempts = 0;
    auto spec = char_variety_fiber(ops, sing, s.ctx.x(), 1, &attempts);
    CHECK(attempts >= 1);
    auto m = match_spectrum(spec, s.fiber);
    CHECK(m.pairs.size() == s.fiber.size());
    CHECK(m.max_discrepancy <= 1e-10 * m.scale);
  }
}

TEST_CASE("joint spectrum for mixed-sign weights") {
  for (const auto& fx : fixtures::mixed_suite()) {
    auto s = setup(fx.input());
    FlagComplex fc(s.in.family);
    auto sing = singular_subspace(fc, s.in.weights, s.ctx.chi());
    OperatorFamily ops(fc, s.in.weights, s.ctx.circuits(), sing);
    auto m = match_spectrum(char_variety_fiber(ops, sing, s.ctx.x(), 2), s.fiber);
    CHECK(m.max_discrepancy <= 1e-8 * m.scale);
  }
}
