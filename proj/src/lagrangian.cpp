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

#include "critvar/lagrangian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "critvar/errors.hpp"

namespace critvar {

LaurentPolynomial LaurentPolynomial::q(int n, int j, Rational c) {
  LaurentPolynomial out(n);
  Exponents e(static_cast<std::size_t>(2 * n), 0);
  e[static_cast<std::size_t>(j)] = 1;
  out.add_term(e, c);
  return out;
}

LaurentPolynomial LaurentPolynomial::p(int n, int j, int power, Rational c) {
  LaurentPolynomial out(n);
  Exponents e(static_cast<std::size_t>(2 * n), 0);
  e[static_cast<std::size_t>(n + j)] = power;
  out.add_term(e, c);
  return out;
}

void LaurentPolynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

namespace {

LaurentPolynomial differentiate(const LaurentPolynomial& f, std::size_t slot) {
  LaurentPolynomial out(f.n());
  for (const auto& [e, c] : f.terms()) {
    if (e[slot] == 0) continue;
    auto d = e;
    d[slot] -= 1;
    out.add_term(d, c * e[slot]);
  }
  return out;
}

}  // namespace

LaurentPolynomial LaurentPolynomial::derivative_q(int j) const {
  return differentiate(*this, static_cast<std::size_t>(j));
}

LaurentPolynomial LaurentPolynomial::derivative_p(int j) const {
  return differentiate(*this, static_cast<std::size_t>(n_ + j));
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  LaurentPolynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& o) const {
  LaurentPolynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
  return out;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  LaurentPolynomial out(n_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

Complex LaurentPolynomial::evaluate(std::span<const Complex> q, std::span<const Complex> p) const {
  Complex s = 0;
  for (const auto& [e, c] : terms_) {
    Complex term = to_double(c);
    for (int j = 0; j < n_; ++j) {
      int eq = e[static_cast<std::size_t>(j)];
      int ep = e[static_cast<std::size_t>(n_ + j)];
      if (eq != 0) term *= std::pow(q[static_cast<std::size_t>(j)], eq);
      if (ep != 0) term *= std::pow(p[static_cast<std::size_t>(j)], ep);
    }
    s += term;
  }
  return s;
}

std::string LaurentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << critvar::to_string(c);
    for (int j = 0; j < n_; ++j) {
      int eq = e[static_cast<std::size_t>(j)];
      int ep = e[static_cast<std::size_t>(n_ + j)];
      if (eq != 0) os << "*q" << j + 1 << (eq != 1 ? "^" + std::to_string(eq) : "");
      if (ep != 0) os << "*p" << j + 1 << (ep != 1 ? "^" + std::to_string(ep) : "");
    }
  }
  return os.str();
}

LaurentPolynomial poisson_bracket(const LaurentPolynomial& fa, const LaurentPolynomial& fb) {
  if (fa.n() != fb.n()) throw ValidationError("poisson_bracket: forms in different variables");
  LaurentPolynomial out(fa.n());
  for (int j = 0; j < fa.n(); ++j)
    out = out + fa.derivative_q(j) * fb.derivative_p(j) - fa.derivative_p(j) * fb.derivative_q(j);
  return out;
}

LagrangianModel::LagrangianModel(const ArrangementFamily& family, WeightVector a,
                                 const std::vector<Circuit>& circuits)
    : family_(family), a_(std::move(a)) {
  const int k = family_.k();
  const int n = family_.n();
  for (int j = 0; j < n; ++j) {
    RationalMatrix stacked(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < n; ++l) stacked(static_cast<std::size_t>(i), static_cast<std::size_t>(l)) = family_.coefficient(i, l);
    stacked(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = 1;
    if (rank(stacked) == static_cast<std::size_t>(k))
      throw ValidationError("coordinate vector e_" + std::to_string(j + 1) + " lies in Y");
  }

  std::vector<std::vector<Rational>> rows;
  for (const auto& c : circuits) {
    if (rows.size() == static_cast<std::size_t>(n - k)) break;
    RationalMatrix trial(rows.size() + 1, static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int j = 0; j < n; ++j) trial(r, static_cast<std::size_t>(j)) = rows[r][static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j) trial(rows.size(), static_cast<std::size_t>(j)) = c.lambda[static_cast<std::size_t>(j)];
    if (rank(trial) == rows.size() + 1) rows.push_back(c.lambda);
  }
  if (rows.size() != static_cast<std::size_t>(n - k))
    throw ConsistencyError("circuit vectors do not span Y^perp");
  yperp_ = RationalMatrix(rows.size(), static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < n; ++j) yperp_(r, static_cast<std::size_t>(j)) = rows[r][static_cast<std::size_t>(j)];
  if (!(family_.b() * yperp_.transpose()).is_zero())
    throw ConsistencyError("Y^perp basis is not orthogonal to Y");
}

std::vector<LaurentPolynomial> LagrangianModel::generators() const {
  const int n = family_.n();
  std::vector<LaurentPolynomial> out;
  for (int i = 0; i < family_.k(); ++i) {
    LaurentPolynomial f(n);
    for (int j = 0; j < n; ++j) f = f + LaurentPolynomial::p(n, j, 1, family_.coefficient(i, j));
    out.push_back(std::move(f));
  }
  for (std::size_t r = 0; r < yperp_.rows(); ++r) {
    LaurentPolynomial g(n);
    for (int j = 0; j < n; ++j) {
      const Rational& beta = yperp_(r, static_cast<std::size_t>(j));
      if (beta == 0) continue;
      g = g + LaurentPolynomial::q(n, j, beta) - LaurentPolynomial::p(n, j, -1, beta * a_[static_cast<std::size_t>(j)]);
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

double generator_residual(const LagrangianModel& model, std::span<const Complex> x,
                          std::span<const Complex> p) {
  double worst = 0;
  for (const auto& g : model.generators()) worst = std::max(worst, std::abs(g.evaluate(x, p)));
  return worst;
}

Complex weight(const LagrangianModel& model, int j) {
  return to_double(model.weights()[static_cast<std::size_t>(j)]);
}

}  // namespace

LagrangianPoint psi_map(const LagrangianModel& model, const MasterContext& ctx,
                        std::span<const Complex> u) {
  LagrangianPoint point;
  point.x = ctx.x();
  point.p = master_z_derivatives(ctx, u);
  point.residual = generator_residual(model, point.x, point.p);
  return point;
}

std::vector<LagrangianPoint> fiber_points(const LagrangianModel& model, const MasterContext& ctx,
                                          const CriticalAlgebraModel& crit, double tol) {
  std::vector<LagrangianPoint> out;
  for (const auto& pt : crit.points) {
    auto lp = psi_map(model, ctx, pt.u);
    double scale = 1.0;
    for (int j = 0; j < model.n(); ++j) {
      scale = std::max(scale, std::abs(lp.p[static_cast<std::size_t>(j)]));
      scale = std::max(scale, std::abs(weight(model, j) / lp.p[static_cast<std::size_t>(j)]));
      scale = std::max(scale, std::abs(lp.x[static_cast<std::size_t>(j)]));
    }
    if (lp.residual > tol * scale)
      throw ConsistencyError("generator residual " + std::to_string(lp.residual) + " at a fiber point");
    out.push_back(std::move(lp));
  }
  return out;
}

Complex jacobian_I(const LagrangianModel& model, const LagrangianPoint& point, const Subset& chart) {
  const auto& fam = model.family();
  if (fam.minor(chart) == 0) throw ValidationError("chart " + format_subset(chart) + " has d_I = 0");
  const int n = model.n();
  Complex sum = 0;
  // M ranges over complements of k-subsets
  const auto& subsets = fam.k_subsets();
  const auto& minors = fam.k_minors();
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (minors[s] == 0) continue;
    double d = to_double(minors[s]);
    Complex term = d * d;
    for (int j = 0; j < n; ++j) {
      if (std::binary_search(subsets[s].begin(), subsets[s].end(), j)) continue;
      const Complex& pj = point.p[static_cast<std::size_t>(j)];
      term *= weight(model, j) / (pj * pj);
    }
    sum += term;
  }
  return (n - model.k()) % 2 == 0 ? sum : -sum;
}

Complex jacobian_I_numeric(const LagrangianModel& model, const LagrangianPoint& point,
                           const Subset& chart, double step) {
  const auto& fam = model.family();
  const Rational& d = fam.minor(chart);
  if (d == 0) throw ValidationError("chart " + format_subset(chart) + " has d_I = 0");
  const int k = model.k();
  const int n = model.n();
  Subset rest;
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(chart.begin(), chart.end(), j)) rest.push_back(j);
  const auto m = static_cast<Eigen::Index>(rest.size());

  Eigen::MatrixXcd b_chart(k, k), b_rest(k, m);
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < k; ++c) b_chart(i, c) = fam.coefficient_d(i, chart[static_cast<std::size_t>(c)]);
    for (Eigen::Index c = 0; c < m; ++c) b_rest(i, c) = fam.coefficient_d(i, rest[static_cast<std::size_t>(c)]);
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(b_chart);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_t(b_chart.transpose());
  // (x_I fixed, p_rest) -> x_rest. Only differences of this map are used,
  // formed directly: x_I drops out and a/p(+) - a/p(-) = a (p(-) - p(+)) / (p(+) p(-))
  // with the p difference taken from the exact step, so nothing large cancels.
  auto chart_difference = [&](const Eigen::VectorXcd& plus, const Eigen::VectorXcd& minus) {
    Eigen::VectorXcd chart_plus = -lu.solve(b_rest * plus);
    Eigen::VectorXcd chart_minus = -lu.solve(b_rest * minus);
    Eigen::VectorXcd chart_delta = -lu.solve(b_rest * (plus - minus));
    Eigen::VectorXcd y_delta(k);
    for (int c = 0; c < k; ++c)
      y_delta(c) = weight(model, chart[static_cast<std::size_t>(c)]) * chart_delta(c) / (chart_plus(c) * chart_minus(c));
    Eigen::VectorXcd out = b_rest.transpose() * lu_t.solve(y_delta);
    for (Eigen::Index c = 0; c < m; ++c)
      out(c) -= weight(model, rest[static_cast<std::size_t>(c)]) * (plus(c) - minus(c)) / (plus(c) * minus(c));
    return out;
  };

  Eigen::VectorXcd p0(m);
  for (Eigen::Index c = 0; c < m; ++c) p0(c) = point.p[static_cast<std::size_t>(rest[static_cast<std::size_t>(c)])];
  Eigen::MatrixXcd jac(m, m);
  auto central = [&](Eigen::Index c, Complex h) {
    Eigen::VectorXcd plus = p0, minus = p0;
    plus(c) += h;
    minus(c) -= h;
    return Eigen::VectorXcd(chart_difference(plus, minus) / (plus(c) - minus(c)));  // the representable step
  };
  // The chart p's follow from p0 by the linear map B_I^-1 B_rest, which may
  // amplify and cancel, so the step is relative to the smallest |p_j| of the
  // point divided by the gain of that map, not to p0(c).
  double p_min = std::abs(point.p.front());
  for (const auto& v : point.p) p_min = std::min(p_min, std::abs(v));
  const double gain = std::max(1.0, Eigen::MatrixXcd(lu.solve(b_rest)).cwiseAbs().rowwise().sum().maxCoeff());
  p_min /= gain;
  for (Eigen::Index c = 0; c < m; ++c) {
    const Complex h = step * p_min * p0(c) / std::abs(p0(c));
    jac.col(c) = (4.0 * central(c, 0.5 * h) - central(c, h)) / 3.0;
  }
  const double dd = to_double(d);
  return dd * dd * jac.determinant();
}

Complex hessian_on_L(const LagrangianModel& model, const LagrangianPoint& point) {
  const auto& fam = model.family();
  Complex sum = 0;
  for (std::size_t s = 0; s < fam.k_subsets().size(); ++s) {
    if (fam.k_minors()[s] == 0) continue;
    double d = to_double(fam.k_minors()[s]);
    Complex term = d * d;
    for (int i : fam.k_subsets()[s]) {
      const Complex& pi = point.p[static_cast<std::size_t>(i)];
      term *= pi * pi / weight(model, i);
    }
    sum += term;
  }
  return model.k() % 2 == 0 ? sum : -sum;
}

Complex hessian_from_jacobian(const LagrangianModel& model, const LagrangianPoint& point,
                              const Subset& chart) {
  Complex v = jacobian_I(model, point, chart);
  for (int j = 0; j < model.n(); ++j) {
    const Complex& pj = point.p[static_cast<std::size_t>(j)];
    v *= pj * pj / weight(model, j);
  }
  return model.n() % 2 == 0 ? v : -v;
}

namespace {

// c = det[B; Lambda] / sum_I d_I^2, exact.
Rational system_normalization(const LagrangianModel& model) {
  const auto& fam = model.family();
  const int k = model.k();
  const int n = model.n();
  RationalMatrix stacked(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < k; ++i) stacked(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = fam.coefficient(i, j);
    for (int r = 0; r < n - k; ++r)
      stacked(static_cast<std::size_t>(k + r), static_cast<std::size_t>(j)) = model.yperp_basis()(static_cast<std::size_t>(r), static_cast<std::size_t>(j));
  }
  Rational sum = 0;
  for (const auto& d : fam.k_minors()) sum += d * d;
  return determinant(stacked) / sum;
}

}  // namespace

Complex system_jacobian(const LagrangianModel& model, const LagrangianPoint& point) {
  const auto& fam = model.family();
  const int k = model.k();
  const int n = model.n();
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < k; ++i) m(i, j) = fam.coefficient_d(i, j);
    const Complex& pj = point.p[static_cast<std::size_t>(j)];
    Complex dg = weight(model, j) / (pj * pj);
    for (int r = 0; r < n - k; ++r)
      m(k + r, j) = to_double(model.yperp_basis()(static_cast<std::size_t>(r), static_cast<std::size_t>(j))) * dg;
  }
  Complex v = m.determinant() / to_double(system_normalization(model));
  return (n - k) % 2 == 0 ? v : -v;
}

Complex residue_form_L(const LagrangianModel& model, std::span<const LagrangianPoint> points,
                       std::span<const Complex> f, std::span<const Complex> g) {
  const int n = model.n();
  const auto& fam = model.family();
  Complex sum = 0;
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto& pt = points[q];
    Complex jac = system_jacobian(model, pt);
    // magnitude of the terms making up d_I^2 Jac_I
    double scale = 0;
    for (std::size_t s = 0; s < fam.k_subsets().size(); ++s) {
      double term = to_double(fam.k_minors()[s] * fam.k_minors()[s]);
      for (int j = 0; j < n; ++j)
        if (!std::binary_search(fam.k_subsets()[s].begin(), fam.k_subsets()[s].end(), j))
          term *= std::abs(weight(model, j)) / std::norm(pt.p[static_cast<std::size_t>(j)]);
      scale += term;
    }
    if (std::abs(jac) <= 1e-10 * scale) throw NumericalError("degenerate fiber point in residue form");
    Complex term = f[q] * g[q];
    for (int j = 0; j < n; ++j) {
      const Complex& pj = pt.p[static_cast<std::size_t>(j)];
      term *= weight(model, j) / (pj * pj);
    }
    sum += (n % 2 == 0 ? term : -term) / jac;
  }
  return sum;
}

std::vector<std::vector<Complex>> marked_p_elements(const FlagComplex& fc,
                                                    const LagrangianModel& model,
                                                    std::span<const LagrangianPoint> points) {
  const auto& basis = fc.top();
  std::vector<std::vector<Complex>> out(basis.size(), std::vector<Complex>(points.size()));
  for (std::size_t q = 0; q < points.size(); ++q) {
    for (std::size_t s = 0; s < basis.size(); ++s) {
      Complex v = to_double(model.family().minor(basis[s]));
      for (int i : basis[s]) v *= points[q].p[static_cast<std::size_t>(i)];
      out[s][q] = v;
    }
  }
  return out;
}

namespace {

bool tuple_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// One attempt; empty result means the combination was not usable.
std::vector<std::vector<Complex>> joint_spectrum_attempt(const std::vector<Eigen::MatrixXcd>& ks,
                                                         const Eigen::MatrixXd& gram, bool real_x,
                                                         std::span<const double> coeffs) {
  const auto dim = gram.rows();
  std::vector<Eigen::MatrixXcd> work = ks;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  const bool symmetrize = real_x && llt.info() == Eigen::Success;
  if (symmetrize) {
    // A = L^T K L^{-T} is symmetric when K is self-adjoint for the Gram form
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd l_inv_t = l.transpose().inverse();
    for (auto& m : work) m = (l.transpose().cast<Complex>() * m * l_inv_t.cast<Complex>()).eval();
  }
  Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t j = 0; j < work.size(); ++j) combo += coeffs[j] * work[j];

  Eigen::MatrixXcd vectors;
  Eigen::VectorXcd values;
  if (symmetrize) {
    Eigen::MatrixXd sym = combo.real();
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) return {};
    vectors = es.eigenvectors().cast<Complex>();
    values = es.eigenvalues().cast<Complex>();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(combo);
    if (es.info() != Eigen::Success) return {};
    vectors = es.eigenvectors();
    values = es.eigenvalues();
  }

  double spread = 1.0;
  for (Eigen::Index i = 0; i < dim; ++i) spread = std::max(spread, std::abs(values(i)));
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i + 1; j < dim; ++j)
      if (std::abs(values(i) - values(j)) <= 1e-8 * spread) return {};

  std::vector<std::vector<Complex>> tuples;
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd v = vectors.col(c).normalized();
    std::vector<Complex> y;
    for (const auto& m : work) {
      Eigen::VectorXcd mv = m * v;
      Complex lambda = v.dot(mv);  // conjugates v
      double norm_m = std::max(1.0, m.norm());
      if ((mv - lambda * v).norm() > 1e-7 * norm_m) return {};
      y.push_back(lambda);
    }
    tuples.push_back(std::move(y));
  }
  std::sort(tuples.begin(), tuples.end(), tuple_less);
  return tuples;
}

}  // namespace

std::vector<std::vector<Complex>> char_variety_fiber(const OperatorFamily& ops,
                                                     const SingularSubspace& sing,
                                                     std::span<const Complex> x,
                                                     std::uint64_t seed, int* attempts) {
  const auto n = static_cast<int>(ops.n());
  std::vector<Eigen::MatrixXcd> ks;
  for (int j = 0; j < n; ++j) ks.push_back(ops.k_j_restricted_numeric(x, j));
  if (sing.dim() == 0) return {};
  Eigen::MatrixXd gram = to_eigen(sing.gram());
  bool real_x = std::all_of(x.begin(), x.end(), [](const Complex& z) { return z.imag() == 0.0; });

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, 997);
  for (int attempt = 1; attempt <= 5; ++attempt) {
    std::vector<double> coeffs(static_cast<std::size_t>(n));
    for (auto& c : coeffs) c = pick(rng) / 997.0;
    auto tuples = joint_spectrum_attempt(ks, gram, real_x, coeffs);
    if (!tuples.empty()) {
      if (attempts) *attempts = attempt;
      return tuples;
    }
  }
  throw NumericalError("restricted pencil is defective after 5 random combinations");
}

SpectrumMatch match_spectrum(std::vector<std::vector<Complex>> spectrum,
                             std::span<const LagrangianPoint> points) {
  SpectrumMatch out;
  out.spectrum = std::move(spectrum);
  for (const auto& p : points) out.images.push_back(p.p);
  for (const auto& v : out.images)
    for (const auto& z : v) out.scale = std::max(out.scale, std::abs(z));

  auto distance = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };
  std::vector<bool> used_s(out.spectrum.size()), used_i(out.images.size());
  const std::size_t count = std::min(out.spectrum.size(), out.images.size());
  for (std::size_t step = 0; step < count; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> pick{0, 0};
    for (std::size_t s = 0; s < out.spectrum.size(); ++s) {
      if (used_s[s]) continue;
      for (std::size_t i = 0; i < out.images.size(); ++i) {
        if (used_i[i]) continue;
        double d = distance(out.spectrum[s], out.images[i]);
        if (d < best) {
          best = d;
          pick = {s, i};
        }
      }
    }
    used_s[pick.first] = used_i[pick.second] = true;
    out.pairs.push_back(pick);
    out.max_discrepancy = std::max(out.max_discrepancy, best);
  }
  if (out.spectrum.size() != out.images.size())
    out.max_discrepancy = std::numeric_limits<double>::infinity();
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace critvar
