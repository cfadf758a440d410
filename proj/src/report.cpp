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

#include "critvar/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "critvar/errors.hpp"

namespace critvar {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

// Runs body, which fills residual and details; exceptions become failures.
CheckRecord run_check(const std::string& name, double tolerance,
                      const std::function<void(CheckRecord&)>& body) {
  CheckRecord rec;
  rec.name = name;
  rec.tolerance = tolerance;
  rec.status = CheckStatus::Pass;  // body sets Skipped to opt out
  try {
    body(rec);
    if (rec.status != CheckStatus::Skipped)
      rec.status = rec.max_residual <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    rec.status = CheckStatus::Fail;
    rec.max_residual = kInf;
    rec.details = e.what();
  }
  return rec;
}

CheckRecord skipped(const std::string& name, const std::string& why) {
  CheckRecord rec;
  rec.name = name;
  rec.details = why;
  return rec;
}

double relative(Complex value, Complex reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

std::vector<Complex> complex_column(const RationalMatrix& m, std::size_t c) {
  return to_complex(m.column(c));
}

double s_norm(std::span<const Rational> diag, std::span<const Complex> v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::abs(to_double(diag[i])) * std::norm(v[i]);
  return std::sqrt(s);
}

std::string json_rational_str(const Rational& q) { return to_string(q); }

}  // namespace

bool Certificate::certified() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckRecord& c) { return c.status == CheckStatus::Fail; });
}

const CheckRecord* Certificate::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Analysis start_analysis(ArrangementInput input, const RunOptions& options) {
  Analysis a{std::move(input), {}, {}, {}, {}, {}, {}, {}};
  a.ctx.emplace(a.input.family, a.input.weights, a.input.fiber);
  a.flags.emplace(a.input.family, options.exec);
  return a;
}

namespace {

void ensure_solved(Analysis& a, const RunOptions& options) {
  if (!a.crit) a.crit = solve_critical(*a.ctx, options.solver);
}

void ensure_operators(Analysis& a, const RunOptions& options) {
  if (!a.sing) a.sing = singular_subspace(*a.flags, a.input.weights, a.ctx->chi());
  if (!a.ops) a.ops.emplace(*a.flags, a.input.weights, a.ctx->circuits(), *a.sing, options.exec);
}

void ensure_lagrangian(Analysis& a, const RunOptions& options) {
  ensure_solved(a, options);
  if (!a.lagrangian) a.lagrangian.emplace(a.input.family, a.input.weights, a.ctx->circuits());
  if (a.fiber.empty() && !a.crit->points.empty()) a.fiber = fiber_points(*a.lagrangian, *a.ctx, *a.crit);
}

bool real_positive(const Analysis& a) { return a.input.weights.all_positive(); }

}  // namespace

std::vector<CheckRecord> solver_checks(Analysis& a, const RunOptions& options) {
  std::vector<CheckRecord> out;
  const auto& ctx = *a.ctx;
  const auto& fc = *a.flags;
  const int k = ctx.k();

  out.push_back(run_check("count", 0.0, [&](CheckRecord& r) {
    ensure_solved(a, options);
    long found = 0, degenerate = 0;
    for (const auto& p : a.crit->points) {
      found += p.multiplicity;
      if (p.degenerate) ++degenerate;
    }
    r.max_residual = static_cast<double>(std::labs(found - std::labs(a.crit->chi)) + degenerate);
    r.details = "found " + std::to_string(found) + " points, |chi| = " + std::to_string(std::labs(a.crit->chi)) +
                ", degenerate " + std::to_string(degenerate) + ", method " + a.crit->method;
  }));
  if (!a.crit) return out;
  const auto& points = a.crit->points;
  auto diag = contravariant_diagonal(fc, ctx.weights(), k);

  out.push_back(run_check("shapovalov_norm", 1e-8, [&](CheckRecord& r) {
    for (const auto& p : points) {
      auto f = specialization_vector(ctx, fc, p.u);
      Complex norm = contravariant_form(ctx, fc, f, f);
      Complex det = master_hessian_matrix(ctx, p.u).determinant();
      Complex hess = k % 2 == 0 ? det : -det;
      r.max_residual = std::max({r.max_residual, relative(norm, hess), relative(p.hessian, det)});
    }
    r.details = "S(F(u),F(u)) against (-1)^k det of the Hessian matrix";
  }));

  out.push_back(run_check("orthogonality", 1e-8, [&](CheckRecord& r) {
    std::vector<std::vector<Complex>> fs;
    for (const auto& p : points) fs.push_back(specialization_vector(ctx, fc, p.u));
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        r.max_residual = std::max(r.max_residual, std::abs(contravariant_form(ctx, fc, fs[i], fs[j])) /
                                                      (s_norm(diag, fs[i]) * s_norm(diag, fs[j])));
    r.details = std::to_string(fs.size() * (fs.size() - 1) / 2) + " pairs";
  }));

  out.push_back(run_check("canonical_identity", 1e-8, [&](CheckRecord& r) {
    ensure_operators(a, options);
    const auto& sing = *a.sing;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t c = 0; c < sing.dim(); ++c) {
      auto v = complex_column(sing.basis(), c);
      auto g = s_projection(ctx, fc, *a.crit, v);
      auto e = canonical_iso(ctx, fc, *a.crit, g);
      for (std::size_t row = 0; row < sing.dim(); ++row) {
        Complex expected = row == c ? sign : 0.0;
        r.max_residual = std::max(r.max_residual, std::abs(e[sing.free_rows()[row]] - expected));
      }
      // E lands in Sing: compare with the reconstruction from its coordinates
      std::vector<Complex> back(e.size());
      for (std::size_t q = 0; q < sing.dim(); ++q)
        for (std::size_t i = 0; i < e.size(); ++i) back[i] += to_double(sing.basis()(i, q)) * e[sing.free_rows()[q]];
      for (std::size_t i = 0; i < e.size(); ++i) r.max_residual = std::max(r.max_residual, std::abs(back[i] - e[i]));
    }
    r.details = "E o [S] on a Sing basis of dimension " + std::to_string(sing.dim());
  }));

  if (real_positive(a)) {
    out.push_back(run_check("reality", 1e-10, [&](CheckRecord& r) {
      for (const auto& p : points)
        for (const auto& z : p.u) r.max_residual = std::max(r.max_residual, std::abs(z.imag()) / (1.0 + std::abs(z)));
      long missing = std::labs(a.crit->chi) - static_cast<long>(points.size());
      if (missing != 0) r.max_residual = kInf;
      r.details = "max |Im u| relative to 1+|u|, positive weights";
    }));
  } else {
    out.push_back(skipped("reality", "weights not all positive"));
  }
  return out;
}

Certificate certify(Analysis& a, const RunOptions& options) {
  Certificate cert;
  cert.options = options;
  const auto& ctx = *a.ctx;
  const auto& fc = *a.flags;
  const int k = ctx.k();
  const int n = ctx.n();

  cert.checks.push_back(run_check("unbalanced", 0.0, [&](CheckRecord& r) {
    auto rep = is_unbalanced(a.input.family, a.input.weights, a.input.fiber);
    r.max_residual = rep.unbalanced ? 0.0 : 1.0;
    r.details = rep.shortcut ? "positive weights" : std::to_string(rep.dense_edges.size()) + " dense edges";
  }));

  for (auto& c : solver_checks(a, options)) cert.checks.push_back(std::move(c));
  const bool solved = a.crit.has_value();

  cert.checks.push_back(run_check("operator_symmetry", 0.0, [&](CheckRecord& r) {
    ensure_operators(a, options);
    int bad = 0;
    for (int j = 0; j < n; ++j) {
      auto op = a.ops->k_j(a.input.fiber.values, j);  // throws if Sing is not preserved
      if (!is_contravariant_symmetric(op.matrix, a.sing->diagonal())) ++bad;
    }
    for (std::size_t c = 0; c < a.ops->circuits().size(); ++c)
      if (!is_contravariant_symmetric(a.ops->l_c(c), a.sing->diagonal())) ++bad;
    r.max_residual = bad;
    r.details = "exact: K_j and L_C self-adjoint for S, Sing preserved";
  }));

  cert.checks.push_back(run_check("sing_commutativity", 0.0, [&](CheckRecord& r) {
    ensure_operators(a, options);
    std::vector<OperatorMatrix> ks;
    for (int j = 0; j < n; ++j) ks.push_back(a.ops->k_j(a.input.fiber.values, j));
    int bad = 0;
    double full = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto& ri = *ks[static_cast<std::size_t>(i)].restricted;
        const auto& rj = *ks[static_cast<std::size_t>(j)].restricted;
        if (!(ri * rj - rj * ri).is_zero()) ++bad;
        Eigen::MatrixXd mi = to_eigen(ks[static_cast<std::size_t>(i)].matrix);
        Eigen::MatrixXd mj = to_eigen(ks[static_cast<std::size_t>(j)].matrix);
        full = std::max(full, (mi * mj - mj * mi).cwiseAbs().maxCoeff());
      }
    }
    r.max_residual = bad;
    std::ostringstream os;
    os << "exact on Sing; full-space commutator max entry " << full << " (diagnostic)";
    r.details = os.str();
  }));

  cert.checks.push_back(run_check("marked_relations", 1e-10, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    ensure_operators(a, options);
    auto w = marked_w_elements(ctx, fc, *a.crit);
    double rw = marked_w_relation_residual(fc, w, kInf);
    auto marked = marked_flag_elements(fc, *a.sing);
    int bad_v = 0;
    for (const auto& rel : marked_flag_relations(fc, marked))
      for (const auto& q : rel.coords)
        if (q != 0) ++bad_v;
    auto p = marked_p_elements(fc, *a.lagrangian, a.fiber);
    double rp = marked_w_relation_residual(fc, p, kInf);
    r.max_residual = std::max(rw, rp) + bad_v;
    std::ostringstream os;
    os << "w residual " << rw << ", v exact violations " << bad_v << ", p residual " << rp;
    r.details = os.str();
  }));

  cert.checks.push_back(run_check("poisson_involution", 0.0, [&](CheckRecord& r) {
    LagrangianModel model(a.input.family, a.input.weights, ctx.circuits());
    auto gens = model.generators();
    int nonzero = 0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        if (!poisson_bracket(gens[i], gens[j]).is_zero()) ++nonzero;
    r.max_residual = nonzero;
    r.details = std::to_string(gens.size()) + " generators, exact brackets";
  }));

  cert.checks.push_back(run_check("psi_residuals", 1e-9, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    double scale = 1.0;
    for (const auto& lp : a.fiber) {
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(lp.p[static_cast<std::size_t>(j)]));
      r.max_residual = std::max(r.max_residual, lp.residual);
    }
    r.max_residual /= scale;
    double closest = kInf;
    for (std::size_t i = 0; i < a.fiber.size(); ++i)
      for (std::size_t j = i + 1; j < a.fiber.size(); ++j) {
        double d = 0;
        for (int l = 0; l < n; ++l) d = std::max(d, std::abs(a.fiber[i].p[static_cast<std::size_t>(l)] - a.fiber[j].p[static_cast<std::size_t>(l)]));
        closest = std::min(closest, d);
      }
    if (closest <= options.solver.dedup_tol * scale) r.max_residual = kInf;
    std::ostringstream os;
    os << "generator residuals relative to " << scale << "; closest pair of images " << closest;
    r.details = os.str();
  }));

  cert.checks.push_back(run_check("chart_independence", 1e-6, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    int charts = 0;
    double formula_spread = 0;
    for (const auto& lp : a.fiber) {
      std::optional<Complex> first;
      charts = 0;
      for (const auto& chart : ctx.family().k_subsets()) {
        if (ctx.family().minor(chart) == 0) continue;
        ++charts;
        Complex value = jacobian_I(*a.lagrangian, lp, chart);
        if (!first) first = value;
        formula_spread = std::max(formula_spread, relative(value, *first));
        r.max_residual = std::max(r.max_residual, relative(jacobian_I_numeric(*a.lagrangian, lp, chart), value));
      }
    }
    if (formula_spread > 1e-12) r.max_residual = kInf;
    std::ostringstream os;
    os << charts << " admissible charts; numeric chart derivative vs formula; formula spread " << formula_spread;
    r.details = os.str();
  }));

  cert.checks.push_back(run_check("hessian_jacobian", 1e-8, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    for (std::size_t q = 0; q < a.fiber.size(); ++q) {
      const auto& hess = a.crit->points[q].hessian;
      r.max_residual = std::max(r.max_residual, relative(hessian_on_L(*a.lagrangian, a.fiber[q]), hess));
      for (const auto& chart : ctx.family().k_subsets()) {
        if (ctx.family().minor(chart) == 0) continue;
        r.max_residual = std::max(r.max_residual, relative(hessian_from_jacobian(*a.lagrangian, a.fiber[q], chart), hess));
      }
    }
    r.details = "Hess = (-1)^n d_I^2 Jac_I prod p_j^2/a_j over all charts";
  }));

  cert.checks.push_back(run_check("residue_forms", 1e-7, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    const auto& crit = *a.crit;
    const std::size_t m = crit.points.size();
    // pairs (1,1) and (p_j,1) against (1,1) and ([a_j/f_j],1)
    std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>> tests;
    std::vector<Complex> ones(m, 1.0);
    tests.emplace_back(ones, ones);
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> lside(m), cside(m);
      for (std::size_t q = 0; q < m; ++q) {
        lside[q] = a.fiber[q].p[static_cast<std::size_t>(j)];
        cside[q] = ctx.a()[static_cast<std::size_t>(j)] / ctx.affine_values(crit.points[q].u)[static_cast<std::size_t>(j)];
      }
      tests.emplace_back(lside, cside);
    }
    for (const auto& [lside, cside] : tests) {
      Complex l = residue_form_L(*a.lagrangian, a.fiber, lside, ones);
      Complex c = residue_form(crit, cside, ones);
      double scale = 0;
      for (std::size_t q = 0; q < m; ++q) scale += std::abs(cside[q] / crit.points[q].hessian);
      r.max_residual = std::max(r.max_residual, std::abs(l - c) / std::max(scale, 1e-300));
    }
    r.details = std::to_string(tests.size()) + " pairings through Psi*";
  }));

  cert.checks.push_back(run_check("spectrum_match", 1e-8, [&](CheckRecord& r) {
    if (!solved) throw ConsistencyError("no solver output");
    ensure_lagrangian(a, options);
    ensure_operators(a, options);
    int attempts = 0;
    auto spectrum = char_variety_fiber(*a.ops, *a.sing, ctx.x(), options.solver.seed, &attempts);
    auto match = match_spectrum(std::move(spectrum), a.fiber);
    r.max_residual = match.max_discrepancy / match.scale;
    std::ostringstream os;
    os << match.spectrum.size() << " joint eigen-tuples vs " << match.images.size()
       << " fiber points; absolute discrepancy " << match.max_discrepancy << ", scale " << match.scale
       << ", attempts " << attempts;
    r.details = os.str();
  }));

  (void)k;
  return cert;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_json(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(complex_json(z));
  return out;
}

json rational_matrix_json(const RationalMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(json_rational_str(m(r, c)));
    out.push_back(row);
  }
  return out;
}

json to_json(const CheckRecord& c) {
  json out;
  out["name"] = c.name;
  out["status"] = status_name(c.status);
  out["max_residual"] = std::isinf(c.max_residual) ? json("inf") : json(c.max_residual);
  out["tolerance"] = c.tolerance;
  out["details"] = c.details;
  return out;
}

json to_json(const Certificate& cert) {
  json out;
  json checks = json::array();
  for (const auto& c : cert.checks) checks.push_back(to_json(c));
  out["checks"] = checks;
  out["certified"] = cert.certified();
  out["environment"] = {{"seed", cert.options.solver.seed},
                        {"residual_tol", cert.options.solver.residual_tol},
                        {"dedup_tol", cert.options.solver.dedup_tol},
                        {"degeneracy_tol", cert.options.solver.degeneracy_tol},
                        {"ode_tol", cert.options.transport.ode_tol},
                        {"near_disc_tol", cert.options.transport.near_disc_tol},
                        {"version", kVersion}};
  return out;
}

namespace {

json members_json(const Subset& s, int infinity = -1) {
  json out = json::array();
  for (int j : s) {
    if (j == infinity) out.push_back("inf");
    else out.push_back(j + 1);
  }
  return out;
}

}  // namespace

json analyze_report(const ArrangementInput& input) {
  const auto& fam = input.family;
  json out;
  out["k"] = fam.k();
  out["n"] = fam.n();
  auto cs = circuits(fam);
  json list = json::array();
  for (const auto& c : cs) {
    json lam = json::array();
    for (int j : c.members) lam.push_back(to_string(c.lambda[static_cast<std::size_t>(j)]));
    list.push_back({{"members", members_json(c.members)}, {"lambda", lam},
                    {"f_C(x)", to_string(c.evaluate(input.fiber.values))}});
  }
  out["circuits"] = cs.size();
  out["circuit_list"] = list;
  json counts = json::array();
  for (int p = 0; p <= fam.k(); ++p) counts.push_back(independent_subsets(fam, p).size());
  out["independent_counts"] = counts;
  out["chi"] = euler_characteristic(fam);
  auto disc = discriminant_membership(cs, input.fiber.values);
  out["discriminant"] = disc.on ? "on" : "off";
  json viol = json::array();
  for (const auto& s : disc.violating) viol.push_back(members_json(s));
  out["violating_circuits"] = viol;
  if (disc.on) {
    out["unbalanced"] = nullptr;
    out["unbalanced_note"] = "not evaluated: fiber lacks normal crossings";
    return out;
  }
  try {
    auto rep = is_unbalanced(fam, input.weights, input.fiber);
    out["unbalanced"] = rep.unbalanced;
    out["unbalanced_shortcut"] = rep.shortcut;
    json edges = json::array();
    for (const auto& e : rep.dense_edges)
      edges.push_back({{"members", members_json(e.members, fam.n())}, {"weight", to_string(e.weight)}});
    out["dense_edges"] = edges;
  } catch (const ValidationError& e) {
    out["unbalanced"] = nullptr;
    out["unbalanced_note"] = e.what();
  }
  return out;
}

json solve_report(Analysis& a, const RunOptions& options) {
  auto checks = solver_checks(a, options);
  json out;
  const auto& crit = *a.crit;
  out["chi"] = crit.chi;
  out["method"] = crit.method;
  out["complete"] = crit.complete();
  out["certifying"] = crit.certifying();
  out["seeds_used"] = crit.seeds_used;
  out["warnings"] = crit.warnings;
  json pts = json::array();
  for (const auto& p : crit.points) {
    pts.push_back({{"u", complex_json(p.u)},
                   {"residual", p.residual},
                   {"tolerance", residual_tolerance(*a.ctx, p.u, options.solver)},
                   {"hessian", complex_json(p.hessian)},
                   {"degenerate", p.degenerate},
                   {"multiplicity", p.multiplicity},
                   {"lagrangian_image", complex_json(p.lagrangian_image)}});
  }
  out["points"] = pts;
  json cert = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    cert.push_back(to_json(c));
    ok = ok && c.status != CheckStatus::Fail;
  }
  out["certificate"] = {{"checks", cert}, {"certified", ok}};
  return out;
}

std::string solve_csv(const Analysis& a) {
  std::ostringstream os;
  os.precision(17);
  const int k = a.ctx->k();
  const int n = a.ctx->n();
  for (int i = 1; i <= k; ++i) os << "re_u" << i << ",im_u" << i << ",";
  os << "hess_re,hess_im";
  for (int j = 1; j <= n; ++j) os << ",p" << j << "_re,p" << j << "_im";
  os << "\n";
  // adding 0.0 turns -0 into 0
  for (const auto& p : a.crit->points) {
    for (const auto& z : p.u) os << z.real() + 0.0 << "," << z.imag() + 0.0 << ",";
    os << p.hessian.real() + 0.0 << "," << p.hessian.imag() + 0.0;
    for (const auto& z : p.lagrangian_image) os << "," << z.real() + 0.0 << "," << z.imag() + 0.0;
    os << "\n";
  }
  return os.str();
}

json gm_report(Analysis& a, const RunOptions& options) {
  ensure_operators(a, options);
  const int n = a.ctx->n();
  json out;
  json cs = json::array();
  for (const auto& c : a.ctx->circuits()) cs.push_back(members_json(c.members));
  out["circuits"] = cs;
  out["sing_dim"] = a.sing->dim();
  out["sing_basis"] = rational_matrix_json(a.sing->basis());
  json basis = json::array();
  for (const auto& s : a.flags->top().subsets()) basis.push_back(members_json(s));
  out["flag_basis"] = basis;
  json ops = json::array();
  std::vector<OperatorMatrix> ks;
  for (int j = 0; j < n; ++j) {
    ks.push_back(a.ops->k_j(a.input.fiber.values, j));
    const auto& op = ks.back();
    ops.push_back({{"name", op.provenance},
                   {"matrix", rational_matrix_json(op.matrix)},
                   {"restricted", rational_matrix_json(*op.restricted)},
                   {"symmetric", is_contravariant_symmetric(op.matrix, a.sing->diagonal())}});
  }
  out["operators"] = ops;
  bool commute = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& ri = *ks[static_cast<std::size_t>(i)].restricted;
      const auto& rj = *ks[static_cast<std::size_t>(j)].restricted;
      commute = commute && (ri * rj - rj * ri).is_zero();
    }
  out["commute_on_sing"] = commute;
  return out;
}

json specvar_report(Analysis& a, const RunOptions& options) {
  ensure_lagrangian(a, options);
  ensure_operators(a, options);
  int attempts = 0;
  auto spectrum = char_variety_fiber(*a.ops, *a.sing, a.ctx->x(), options.solver.seed, &attempts);
  auto match = match_spectrum(std::move(spectrum), a.fiber);
  json out;
  json spec = json::array(), imgs = json::array(), pairs = json::array();
  for (const auto& t : match.spectrum) spec.push_back(complex_json(t));
  for (const auto& t : match.images) imgs.push_back(complex_json(t));
  for (const auto& [s, i] : match.pairs) pairs.push_back({s, i});
  out["spectrum"] = spec;
  out["psi_images"] = imgs;
  out["matching"] = pairs;
  out["max_discrepancy"] = std::isinf(match.max_discrepancy) ? json("inf") : json(match.max_discrepancy);
  out["scale"] = match.scale;
  out["tolerance"] = 1e-8 * match.scale;
  out["attempts"] = attempts;
  out["match"] = match.max_discrepancy <= 1e-8 * match.scale;
  return out;
}

json transport_report(Analysis& a, const TransportTask& task, const RunOptions& options) {
  ensure_operators(a, options);
  auto result = transport(*a.ops, task, options.transport);
  json out;
  out["kappa"] = complex_json(task.kappa);
  out["path_length"] = path_length(task.path);
  out["initial"] = complex_json(task.initial);
  out["end"] = complex_json(result.end);
  out["error_estimate"] = result.error_estimate;
  out["steps"] = result.steps;
  out["rejected_steps"] = result.rejected;
  out["min_circuit_value"] = result.min_circuit_value;
  out["ode_tol"] = options.transport.ode_tol;
  out["near_disc_tol"] = options.transport.near_disc_tol;
  out["sing_basis"] = rational_matrix_json(a.sing->basis());
  if (task.path.size() > 1 && task.path.front() == task.path.back()) {
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < result.end.size(); ++i) {
      diff += std::norm(result.end[i] - task.initial[i]);
      norm += std::norm(task.initial[i]);
    }
    out["loop_defect"] = norm > 0 ? std::sqrt(diff / norm) : 0.0;
    out["loop_budget"] = 10.0 * options.transport.ode_tol * path_length(task.path);
  }
  return out;
}

Complex parse_complex(const json& value) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  if (!value.is_string()) throw ParseError("expected a number, [re, im], or a complex string");
  std::string s = value.get<std::string>();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ParseError("empty complex value");
  try {
    if (s.back() != 'i') {
      if (s.find_first_of(".eE") != std::string::npos) return std::stod(s);
      return to_double(parse_rational(s));
    }
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < body.size(); ++i)
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
    auto part = [](const std::string& t, double empty) {
      if (t.empty() || t == "+") return empty;
      if (t == "-") return -empty;
      return std::stod(t);
    };
    if (split == std::string::npos) return {0.0, part(body, 1.0)};
    return {std::stod(body.substr(0, split)), part(body.substr(split), 1.0)};
  } catch (const std::exception&) {
    throw ParseError("cannot parse complex value \"" + s + "\"");
  }
}

std::vector<PathPoint> parse_path(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid path JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("path must be a JSON list of points");
  std::vector<PathPoint> out;
  for (const auto& pt : doc) {
    if (!pt.is_array()) throw ParseError("each path point must be a list");
    PathPoint p;
    for (const auto& v : pt) p.push_back(parse_complex(v));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Complex> parse_vector(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid vector JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("expected a JSON list");
  std::vector<Complex> out;
  for (const auto& v : doc) out.push_back(parse_complex(v));
  return out;
}

}  // namespace critvar
