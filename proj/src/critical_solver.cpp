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

// Critical points of the master function.
//
// Three strategies, chosen by the data:
//  * k = 1: clear denominators to sum_j a_j b_j prod_{i != j} f_i (exact
//    rational coefficients), take companion-matrix eigenvalues, polish by
//    Newton on the gradient.
//  * k >= 2 with positive weights: the real master function is strictly
//    concave on every bounded chamber and tends to -inf on its boundary, so
//    each bounded chamber holds exactly one critical point. Chambers are
//    enumerated exactly and Newton ascent starts from the vertex centroid.
//  * otherwise: damped complex Newton from seeded random starts with
//    deduplication, until |chi| points are found or the budget runs out.

#include "critvar/critical_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>

#include "critvar/errors.hpp"

namespace critvar {

MasterContext::MasterContext(ArrangementFamily family, WeightVector weights, FiberPoint x)
    : family_(std::move(family)), weights_(std::move(weights)), x_(std::move(x)) {
  if (weights_.size() != static_cast<std::size_t>(family_.n()) ||
      x_.values.size() != static_cast<std::size_t>(family_.n()))
    throw ValidationError("weights and x must have n entries");
  a_ = weights_.numeric();
  x_numeric_ = x_.numeric();
  circuits_ = critvar::circuits(family_);
  require_off_discriminant(circuits_, x_.values);
  chi_ = euler_characteristic(family_);
}

std::vector<Complex> MasterContext::affine_values(std::span<const Complex> t) const {
  std::vector<Complex> f(static_cast<std::size_t>(n()));
  double scale = 0.0;
  for (int j = 0; j < n(); ++j) {
    Complex s = x_numeric_[static_cast<std::size_t>(j)];
    double mag = std::abs(s);
    for (int i = 0; i < k(); ++i) {
      Complex term = family_.coefficient_d(i, j) * t[static_cast<std::size_t>(i)];
      s += term;
      mag += std::abs(term);
    }
    f[static_cast<std::size_t>(j)] = s;
    scale = std::max(scale, mag);
    if (std::abs(s) == 0.0) throw NumericalError("point lies on hyperplane " + std::to_string(j + 1));
  }
  return f;
}

std::vector<Complex> master_gradient(const MasterContext& ctx, std::span<const Complex> t) {
  auto f = ctx.affine_values(t);
  std::vector<Complex> g(static_cast<std::size_t>(ctx.k()));
  for (int j = 0; j < ctx.n(); ++j) {
    Complex q = ctx.a()[static_cast<std::size_t>(j)] / f[static_cast<std::size_t>(j)];
    for (int i = 0; i < ctx.k(); ++i) g[static_cast<std::size_t>(i)] += ctx.family().coefficient_d(i, j) * q;
  }
  return g;
}

std::vector<Complex> master_z_derivatives(const MasterContext& ctx, std::span<const Complex> t) {
  auto f = ctx.affine_values(t);
  std::vector<Complex> p(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) p[j] = ctx.a()[j] / f[j];
  return p;
}

Complex master_hessian(const MasterContext& ctx, std::span<const Complex> t) {
  auto f = ctx.affine_values(t);
  Complex sum = 0;
  const auto& subsets = ctx.family().k_subsets();
  const auto& minors = ctx.family().k_minors();
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (minors[s] == 0) continue;
    double d = to_double(minors[s]);
    Complex term = d * d;
    for (int i : subsets[s]) term *= ctx.a()[static_cast<std::size_t>(i)] / (f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)]);
    sum += term;
  }
  return ctx.k() % 2 == 0 ? sum : -sum;
}

Eigen::MatrixXcd master_hessian_matrix(const MasterContext& ctx, std::span<const Complex> t) {
  auto f = ctx.affine_values(t);
  const int k = ctx.k();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
  for (int j = 0; j < ctx.n(); ++j) {
    Complex w = ctx.a()[static_cast<std::size_t>(j)] / (f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)]);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        h(i, l) -= w * ctx.family().coefficient_d(i, j) * ctx.family().coefficient_d(l, j);
  }
  return h;
}

double hessian_scale(const MasterContext& ctx, std::span<const Complex> t) {
  auto f = ctx.affine_values(t);
  double sum = 0;
  const auto& subsets = ctx.family().k_subsets();
  const auto& minors = ctx.family().k_minors();
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    double d = to_double(minors[s]);
    double term = d * d;
    for (int i : subsets[s]) term *= std::abs(ctx.a()[static_cast<std::size_t>(i)]) / std::norm(f[static_cast<std::size_t>(i)]);
    sum += term;
  }
  return sum;
}

bool CriticalAlgebraModel::complete() const {
  long total = 0;
  for (const auto& p : points) total += p.multiplicity;
  return total == std::labs(chi);
}

bool CriticalAlgebraModel::certifying() const {
  return complete() && std::none_of(points.begin(), points.end(),
                                    [](const CriticalPoint& p) { return p.degenerate; });
}

namespace {

double max_abs(std::span<const Complex> v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double norm2(std::span<const Complex> v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

double residual_tolerance(const MasterContext& ctx, std::span<const Complex> u,
                          const SolverOptions& options) {
  auto f = ctx.affine_values(u);
  double min_f = std::abs(f.front());
  for (const auto& v : f) min_f = std::min(min_f, std::abs(v));
  return options.residual_tol * (1.0 + norm2(ctx.a()) / min_f);
}

double gradient_cancellation(const MasterContext& ctx, std::span<const Complex> u) {
  auto f = ctx.affine_values(u);
  auto g = master_gradient(ctx, u);
  double terms = 0;
  for (int i = 0; i < ctx.k(); ++i) {
    double s = 0;
    for (int j = 0; j < ctx.n(); ++j)
      s += std::abs(ctx.a()[static_cast<std::size_t>(j)] * ctx.family().coefficient_d(i, j) / f[static_cast<std::size_t>(j)]);
    terms = std::max(terms, s);
  }
  return max_abs(g) / std::max(terms, 1e-300);
}

bool is_critical(const MasterContext& ctx, std::span<const Complex> u, const SolverOptions& options) {
  return max_abs(master_gradient(ctx, u)) <= residual_tolerance(ctx, u, options) &&
         gradient_cancellation(ctx, u) <= kCancellationLimit;
}

CriticalPoint make_critical_point(const MasterContext& ctx, std::vector<Complex> u,
                                  const SolverOptions& options) {
  CriticalPoint p;
  p.residual = max_abs(master_gradient(ctx, u));
  p.hessian = master_hessian(ctx, u);
  p.lagrangian_image = master_z_derivatives(ctx, u);
  p.degenerate = std::abs(p.hessian) <= options.degeneracy_tol * hessian_scale(ctx, u);
  p.u = std::move(u);
  return p;
}

std::vector<Region> bounded_regions(const ArrangementFamily& family, const FiberPoint& x) {
  const int k = family.k();
  const int n = family.n();
  const auto& xs = x.values;
  auto affine = [&](int j, std::span<const Rational> t) {
    Rational s = xs[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) s += family.coefficient(i, j) * t[static_cast<std::size_t>(i)];
    return s;
  };
  auto linear = [&](int j, std::span<const Rational> d) {
    Rational s = 0;
    for (int i = 0; i < k; ++i) s += family.coefficient(i, j) * d[static_cast<std::size_t>(i)];
    return s;
  };

  std::map<std::vector<int>, Region> regions;
  for (const auto& vertex_set : independent_subsets(family, k)) {
    // rows of the local system are the forms through the vertex
    RationalMatrix m(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    RationalMatrix rhs(static_cast<std::size_t>(k), 1);
    for (int r = 0; r < k; ++r) {
      for (int i = 0; i < k; ++i)
        m(static_cast<std::size_t>(r), static_cast<std::size_t>(i)) = family.coefficient(i, vertex_set[static_cast<std::size_t>(r)]);
      rhs(static_cast<std::size_t>(r), 0) = -xs[static_cast<std::size_t>(vertex_set[static_cast<std::size_t>(r)])];
    }
    RationalMatrix inverse = solve(m, RationalMatrix::identity(static_cast<std::size_t>(k)));
    std::vector<Rational> v = (inverse * rhs).column(0);

    std::vector<int> base(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      if (std::binary_search(vertex_set.begin(), vertex_set.end(), j)) continue;
      int s = sgn(affine(j, v));
      if (s == 0) throw DiscriminantError("fiber does not have normal crossings");
      base[static_cast<std::size_t>(j)] = s;
    }
    for (int orthant = 0; orthant < (1 << k); ++orthant) {
      std::vector<int> signs = base;
      for (int r = 0; r < k; ++r)
        signs[static_cast<std::size_t>(vertex_set[static_cast<std::size_t>(r)])] = (orthant >> r) & 1 ? -1 : 1;
      auto& region = regions[signs];
      region.signs = signs;
      if (std::find(region.vertices.begin(), region.vertices.end(), v) == region.vertices.end())
        region.vertices.push_back(v);
    }
  }

  // A chamber is bounded iff its recession cone {d : s_j g_j(d) >= 0} is
  // zero. The cone is pointed, so it is nonzero iff one of its candidate
  // extreme rays (kernel of k-1 independent forms) lies in it.
  std::vector<std::vector<Rational>> rays;
  for (const auto& t : independent_subsets(family, k - 1)) {
    RationalMatrix rows(t.size(), static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < t.size(); ++r)
      for (int i = 0; i < k; ++i) rows(r, static_cast<std::size_t>(i)) = family.coefficient(i, t[r]);
    Kernel ker = nullspace(rows);
    rays.push_back(ker.basis.front());
  }

  std::vector<Region> out;
  for (auto& [signs, region] : regions) {
    bool bounded = true;
    for (const auto& ray : rays) {
      for (int dir : {1, -1}) {
        bool inside = true;
        for (int j = 0; j < n && inside; ++j)
          inside = signs[static_cast<std::size_t>(j)] * dir * sgn(linear(j, ray)) >= 0;
        if (inside) bounded = false;
      }
      if (!bounded) break;
    }
    if (!bounded) continue;
    region.centroid.assign(static_cast<std::size_t>(k), Rational(0));
    for (const auto& v : region.vertices)
      for (int i = 0; i < k; ++i) region.centroid[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    for (auto& c : region.centroid) c /= static_cast<long>(region.vertices.size());
    out.push_back(std::move(region));
  }
  return out;
}

CriticalPoint newton_in_region(const MasterContext& ctx, const Region& region,
                               const SolverOptions& options) {
  const int k = ctx.k();
  const int n = ctx.n();
  Eigen::VectorXd t(k);
  for (int i = 0; i < k; ++i) t(i) = to_double(region.centroid[static_cast<std::size_t>(i)]);
  std::vector<double> a(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    a[static_cast<std::size_t>(j)] = ctx.a()[static_cast<std::size_t>(j)].real();
    x[static_cast<std::size_t>(j)] = ctx.x()[static_cast<std::size_t>(j)].real();
  }
  auto values = [&](const Eigen::VectorXd& p, std::vector<double>& f) {
    for (int j = 0; j < n; ++j) {
      double s = x[static_cast<std::size_t>(j)];
      for (int i = 0; i < k; ++i) s += ctx.family().coefficient_d(i, j) * p(i);
      f[static_cast<std::size_t>(j)] = s;
      if (s * region.signs[static_cast<std::size_t>(j)] <= 0) return false;
    }
    return true;
  };
  auto gradient = [&](const std::vector<double>& f) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < k; ++i)
        g(i) += ctx.family().coefficient_d(i, j) * a[static_cast<std::size_t>(j)] / f[static_cast<std::size_t>(j)];
    return g;
  };
  auto potential = [&](const std::vector<double>& f) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += a[static_cast<std::size_t>(j)] * std::log(std::abs(f[static_cast<std::size_t>(j)]));
    return s;
  };

  std::vector<double> f(static_cast<std::size_t>(n));
  std::vector<double> trial(static_cast<std::size_t>(n));
  if (!values(t, f)) throw NumericalError("region centroid is not interior");
  for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
    Eigen::VectorXd g = gradient(f);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < n; ++j) {
      double w = a[static_cast<std::size_t>(j)] / (f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)]);
      for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
          h(i, l) -= w * ctx.family().coefficient_d(i, j) * ctx.family().coefficient_d(l, j);
    }
    Eigen::VectorXd step = h.ldlt().solve(-g);
    const double phi = potential(f);
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, scale *= 0.5) {
      Eigen::VectorXd candidate = t + scale * step;
      if (!values(candidate, trial)) continue;
      if (potential(trial) > phi || gradient(trial).lpNorm<Eigen::Infinity>() < gnorm) {
        t = candidate;
        f = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted || step.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + t.lpNorm<Eigen::Infinity>())) break;
  }
  std::vector<Complex> u(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) u[static_cast<std::size_t>(i)] = t(i);
  return make_critical_point(ctx, std::move(u), options);
}

namespace {

bool canonical_less(const CriticalPoint& a, const CriticalPoint& b) {
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    if (a.u[i].real() != b.u[i].real()) return a.u[i].real() < b.u[i].real();
    if (a.u[i].imag() != b.u[i].imag()) return a.u[i].imag() < b.u[i].imag();
  }
  return false;
}

bool same_point(std::span<const Complex> a, std::span<const Complex> b, double tol) {
  double diff = 0, mag = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    mag = std::max(mag, std::abs(a[i]));
  }
  return diff <= tol * mag;
}

// Damped Newton on the complex gradient; halving until the residual drops.
// Newton iterates that leave the ball of radius `bound` are escaping to
// infinity, where the gradient decays without a critical point.
std::optional<std::vector<Complex>> complex_newton(const MasterContext& ctx, std::vector<Complex> t,
                                                   const SolverOptions& options, double bound) {
  const int k = ctx.k();
  auto residual_at = [&](std::span<const Complex> p) -> std::optional<double> {
    try {
      auto f = ctx.affine_values(p);
      for (const auto& v : f)
        if (std::abs(v) < 1e-300) return std::nullopt;
      return norm2(master_gradient(ctx, p));
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };
  auto r = residual_at(t);
  if (!r) return std::nullopt;
  for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
    auto g = master_gradient(ctx, t);
    if (is_critical(ctx, t, options)) return t;
    if (max_abs(t) > bound) return std::nullopt;
    Eigen::MatrixXcd h = master_hessian_matrix(ctx, t);
    Eigen::VectorXcd rhs(k);
    for (int i = 0; i < k; ++i) rhs(i) = -g[static_cast<std::size_t>(i)];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(h);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::VectorXcd step = lu.solve(rhs);
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, scale *= 0.5) {
      std::vector<Complex> candidate(t);
      for (int i = 0; i < k; ++i) candidate[static_cast<std::size_t>(i)] += scale * step(i);
      auto rc = residual_at(candidate);
      if (rc && *rc < *r) {
        t = std::move(candidate);
        r = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (is_critical(ctx, t, options)) return t;
      return std::nullopt;
    }
  }
  if (is_critical(ctx, t, options) && max_abs(t) <= bound) return t;
  return std::nullopt;
}

// Damped Newton on the pole-free square system p_j f_j(u) = a_j with
// p = N y, N a basis of ker B. Its solutions are exactly the critical
// points (f_j = 0 would force a_j = 0), so the basins are not squeezed
// between hyperplanes the way they are for the gradient itself.
std::optional<std::vector<Complex>> lifted_newton(const MasterContext& ctx, const Eigen::MatrixXd& kernel,
                                                  std::vector<Complex> t, const SolverOptions& options,
                                                  double bound) {
  const int k = ctx.k();
  const int n = ctx.n();
  const int m = static_cast<int>(kernel.cols());
  auto f0 = ctx.affine_values(t);
  Eigen::VectorXcd target(n);
  for (int j = 0; j < n; ++j) target(j) = ctx.a()[static_cast<std::size_t>(j)] / f0[static_cast<std::size_t>(j)];
  Eigen::VectorXcd y = kernel.cast<Complex>().colPivHouseholderQr().solve(target);

  auto system = [&](const std::vector<Complex>& u, const Eigen::VectorXcd& yy) {
    auto f = ctx.affine_values(u);
    Eigen::VectorXcd p = kernel.cast<Complex>() * yy;
    Eigen::VectorXcd r(n);
    for (int j = 0; j < n; ++j) r(j) = p(j) * f[static_cast<std::size_t>(j)] - ctx.a()[static_cast<std::size_t>(j)];
    return r;
  };
  Eigen::VectorXcd r = system(t, y);
  const double a_scale = norm2(ctx.a());
  for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
    if (r.norm() <= 1e-13 * a_scale) break;
    if (max_abs(t) > bound) return std::nullopt;
    auto f = ctx.affine_values(t);
    Eigen::VectorXcd p = kernel.cast<Complex>() * y;
    Eigen::MatrixXcd jac(n, k + m);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < k; ++i) jac(j, i) = p(j) * ctx.family().coefficient_d(i, j);
      for (int c = 0; c < m; ++c) jac(j, k + c) = kernel(j, c) * f[static_cast<std::size_t>(j)];
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::VectorXcd step = lu.solve(-r);
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, scale *= 0.5) {
      std::vector<Complex> cu(t);
      for (int i = 0; i < k; ++i) cu[static_cast<std::size_t>(i)] += scale * step(i);
      Eigen::VectorXcd cy = y + scale * step.tail(m);
      Eigen::VectorXcd cr = system(cu, cy);
      if (cr.norm() < r.norm()) {
        t = std::move(cu);
        y = std::move(cy);
        r = std::move(cr);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  auto f = ctx.affine_values(t);
  for (const auto& v : f)
    if (std::abs(v) < 1e-300) return std::nullopt;
  // polish on the gradient itself
  return complex_newton(ctx, std::move(t), options, bound);
}

CriticalAlgebraModel solve_univariate(const MasterContext& ctx, const SolverOptions& options) {
  const int n = ctx.n();
  const auto& w = ctx.weights();
  const auto& xs = ctx.fiber().values;
  // P(t) = sum_j a_j b_j prod_{i != j} (b_i t + x_i), ascending coefficients.
  std::vector<Rational> poly(static_cast<std::size_t>(n), Rational(0));
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> term{w[static_cast<std::size_t>(j)] * ctx.family().coefficient(0, j)};
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<Rational> next(term.size() + 1, Rational(0));
      for (std::size_t d = 0; d < term.size(); ++d) {
        next[d] += term[d] * xs[static_cast<std::size_t>(i)];
        next[d + 1] += term[d] * ctx.family().coefficient(0, i);
      }
      term = std::move(next);
    }
    for (std::size_t d = 0; d < term.size(); ++d) poly[d] += term[d];
  }
  while (!poly.empty() && poly.back() == 0) poly.pop_back();

  CriticalAlgebraModel model;
  model.chi = ctx.chi();
  model.method = "companion";
  if (poly.size() <= 1) return model;
  const auto degree = static_cast<Eigen::Index>(poly.size() - 1);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  const double lead = to_double(poly.back());
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -to_double(poly[static_cast<std::size_t>(i)]) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("companion eigenvalue solve failed");

  for (Eigen::Index r = 0; r < degree; ++r) {
    std::vector<Complex> t{solver.eigenvalues()(r)};
    // polish on the gradient itself, accepting only residual decreases
    for (int iter = 0; iter < 8; ++iter) {
      std::vector<Complex> f;
      try {
        f = ctx.affine_values(t);
      } catch (const NumericalError&) {
        break;
      }
      Complex g = 0, dg = 0;
      for (int j = 0; j < n; ++j) {
        double b = ctx.family().coefficient_d(0, j);
        g += ctx.a()[static_cast<std::size_t>(j)] * b / f[static_cast<std::size_t>(j)];
        dg -= ctx.a()[static_cast<std::size_t>(j)] * b * b / (f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)]);
      }
      if (dg == Complex(0)) break;
      std::vector<Complex> next{t[0] - g / dg};
      try {
        if (std::abs(master_gradient(ctx, next)[0]) >= std::abs(g)) break;
      } catch (const NumericalError&) {
        break;
      }
      t = std::move(next);
    }
    auto f = ctx.affine_values(t);
    double scale = 1.0 + std::abs(t[0]);
    bool on_hyperplane = std::any_of(f.begin(), f.end(), [&](const Complex& v) { return std::abs(v) <= 1e-12 * scale; });
    if (on_hyperplane) continue;
    auto point = make_critical_point(ctx, std::move(t), options);
    bool duplicate = std::any_of(model.points.begin(), model.points.end(), [&](const CriticalPoint& p) {
      return same_point(p.u, point.u, options.dedup_tol);
    });
    if (duplicate) {
      model.warnings.push_back("repeated root merged");
      continue;
    }
    model.points.push_back(std::move(point));
  }
  return model;
}

CriticalAlgebraModel solve_by_regions(const MasterContext& ctx, const SolverOptions& options) {
  auto regions = bounded_regions(ctx.family(), ctx.fiber());
  CriticalAlgebraModel model;
  model.chi = ctx.chi();
  model.method = "regions";
  model.seeds_used = regions.size();
  std::vector<std::optional<CriticalPoint>> slots(regions.size());
  const long count = static_cast<long>(regions.size());
  if (options.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < count; ++r)
      slots[static_cast<std::size_t>(r)] = newton_in_region(ctx, regions[static_cast<std::size_t>(r)], options);
  } else {
    for (long r = 0; r < count; ++r)
      slots[static_cast<std::size_t>(r)] = newton_in_region(ctx, regions[static_cast<std::size_t>(r)], options);
  }
  for (auto& s : slots) model.points.push_back(std::move(*s));
  return model;
}

std::vector<Complex> random_start(std::mt19937_64& rng, std::span<const Complex> center, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> t(center.begin(), center.end());
  for (auto& v : t) v += scale * Complex(normal(rng), normal(rng));
  return t;
}

// A point on the segment between two random vertices, blurred by a
// fraction of their distance. Reaches narrow regions the global cloud
// rarely hits.
std::vector<Complex> local_start(std::mt19937_64& rng, const std::vector<std::vector<Complex>>& vertices) {
  std::uniform_int_distribution<std::size_t> pick(0, vertices.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& v = vertices[pick(rng)];
  const auto& w = vertices[pick(rng)];
  const double lambda = unit(rng);
  double dist = 0;
  for (std::size_t i = 0; i < v.size(); ++i) dist = std::max(dist, std::abs(v[i] - w[i]));
  const double blur = 0.25 * std::max(dist, 1e-3);
  std::vector<Complex> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    t[i] = lambda * v[i] + (1.0 - lambda) * w[i] + blur * Complex(normal(rng), normal(rng));
  return t;
}

CriticalAlgebraModel solve_multistart(const MasterContext& ctx, const SolverOptions& options) {
  const int k = ctx.k();
  const std::size_t target = static_cast<std::size_t>(std::labs(ctx.chi()));
  CriticalAlgebraModel model;
  model.chi = ctx.chi();
  model.method = "multistart";

  // start cloud: centred on the mean vertex, spread by the vertex radius
  std::vector<Complex> center(static_cast<std::size_t>(k));
  std::vector<std::vector<Complex>> vertices;
  for (const auto& s : independent_subsets(ctx.family(), k)) {
    Eigen::MatrixXd m(k, k);
    Eigen::VectorXd rhs(k);
    for (int r = 0; r < k; ++r) {
      for (int i = 0; i < k; ++i) m(r, i) = ctx.family().coefficient_d(i, s[static_cast<std::size_t>(r)]);
      rhs(r) = -ctx.x()[static_cast<std::size_t>(s[static_cast<std::size_t>(r)])].real();
    }
    Eigen::VectorXd v = m.fullPivLu().solve(rhs);
    std::vector<Complex> vc(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) vc[static_cast<std::size_t>(i)] = v(i);
    vertices.push_back(vc);
  }
  for (const auto& v : vertices)
    for (int i = 0; i < k; ++i) center[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)] / static_cast<double>(vertices.size());
  double spread = 1.0;
  for (const auto& v : vertices)
    for (int i = 0; i < k; ++i) spread = std::max(spread, std::abs(v[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)]));

  double radius = 0;
  for (const auto& c : center) radius = std::max(radius, std::abs(c));
  const double bound = 1e6 * (radius + spread);

  Eigen::MatrixXd b(k, ctx.n());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < ctx.n(); ++j) b(i, j) = ctx.family().coefficient_d(i, j);
  const Eigen::MatrixXd kernel = b.fullPivLu().kernel();

  std::mt19937_64 rng(options.seed);
  const std::size_t budget = static_cast<std::size_t>(options.budget_per_point) * std::max<std::size_t>(target, 1);
  const std::size_t batch = std::max<std::size_t>(8, 4 * target);
  while (model.points.size() < target && model.seeds_used < budget) {
    const std::size_t size = std::min(batch, budget - model.seeds_used);
    std::vector<std::vector<Complex>> starts;
    for (std::size_t s = 0; s < size; ++s)
      starts.push_back(s % 2 == 0 ? random_start(rng, center, spread) : local_start(rng, vertices));
    std::vector<std::optional<std::vector<Complex>>> found(size);
    const long count = static_cast<long>(size);
    if (options.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long s = 0; s < count; ++s)
        found[static_cast<std::size_t>(s)] = lifted_newton(ctx, kernel, starts[static_cast<std::size_t>(s)], options, bound);
    } else {
      for (long s = 0; s < count; ++s)
        found[static_cast<std::size_t>(s)] = lifted_newton(ctx, kernel, starts[static_cast<std::size_t>(s)], options, bound);
    }
    model.seeds_used += size;
    for (auto& u : found) {
      if (!u || model.points.size() >= target) continue;
      bool duplicate = std::any_of(model.points.begin(), model.points.end(), [&](const CriticalPoint& p) {
        return same_point(p.u, *u, options.dedup_tol);
      });
      if (!duplicate) model.points.push_back(make_critical_point(ctx, std::move(*u), options));
    }
  }
  return model;
}

}  // namespace

CriticalAlgebraModel solve_critical(const MasterContext& ctx, const SolverOptions& options) {
  CriticalAlgebraModel model;
  if (options.strategy == SolverStrategy::Multistart)
    model = solve_multistart(ctx, options);
  else if (ctx.k() == 1)
    model = solve_univariate(ctx, options);
  else if (ctx.weights().all_positive())
    model = solve_by_regions(ctx, options);
  else
    model = solve_multistart(ctx, options);

  std::vector<CriticalPoint> kept;
  for (auto& p : model.points) {
    if (p.residual > residual_tolerance(ctx, p.u, options)) {
      model.warnings.push_back("point dropped: residual " + std::to_string(p.residual) + " above tolerance");
      continue;
    }
    if (gradient_cancellation(ctx, p.u) > kCancellationLimit) {
      model.warnings.push_back("point dropped: gradient small only through decay of its terms");
      continue;
    }
    if (p.degenerate) model.warnings.push_back("degenerate critical point: run is not certifying");
    kept.push_back(std::move(p));
  }
  model.points = std::move(kept);
  std::sort(model.points.begin(), model.points.end(), canonical_less);
  if (!model.complete())
    model.warnings.push_back("undercount: found " + std::to_string(model.points.size()) +
                             " of |chi| = " + std::to_string(std::labs(model.chi)));
  return model;
}

std::vector<Complex> specialization_vector(const MasterContext& ctx, const FlagComplex& fc,
                                           std::span<const Complex> u) {
  auto f = ctx.affine_values(u);
  const auto& basis = fc.top();
  std::vector<Complex> out(basis.size());
  for (std::size_t s = 0; s < basis.size(); ++s) {
    Complex v = to_double(ctx.family().minor(basis[s]));
    for (int i : basis[s]) v /= f[static_cast<std::size_t>(i)];
    out[s] = v;
  }
  return out;
}

Complex contravariant_form(const MasterContext& ctx, const FlagComplex& fc,
                           std::span<const Complex> u, std::span<const Complex> v) {
  const auto& basis = fc.top();
  Complex s = 0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Complex w = 1;
    for (int i : basis[b]) w *= ctx.a()[static_cast<std::size_t>(i)];
    s += w * u[b] * v[b];
  }
  return s;
}

std::vector<Complex> canonical_iso(const MasterContext& ctx, const FlagComplex& fc,
                                   const CriticalAlgebraModel& model, std::span<const Complex> g) {
  std::vector<Complex> out(fc.top().size());
  for (std::size_t p = 0; p < model.points.size(); ++p) {
    const auto& pt = model.points[p];
    if (pt.degenerate) throw NumericalError("canonical isomorphism needs nondegenerate points");
    auto fu = specialization_vector(ctx, fc, pt.u);
    Complex c = g[p] / pt.hessian;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * fu[i];
  }
  return out;
}

std::vector<Complex> s_projection(const MasterContext& ctx, const FlagComplex& fc,
                                  const CriticalAlgebraModel& model, std::span<const Complex> f) {
  std::vector<Complex> out;
  out.reserve(model.points.size());
  for (const auto& pt : model.points)
    out.push_back(contravariant_form(ctx, fc, f, specialization_vector(ctx, fc, pt.u)));
  return out;
}

std::vector<std::vector<Complex>> marked_w_elements(const MasterContext& ctx, const FlagComplex& fc,
                                                    const CriticalAlgebraModel& model) {
  const auto& basis = fc.top();
  std::vector<std::vector<Complex>> out(basis.size(), std::vector<Complex>(model.points.size()));
  for (std::size_t p = 0; p < model.points.size(); ++p) {
    auto f = ctx.affine_values(model.points[p].u);
    for (std::size_t s = 0; s < basis.size(); ++s) {
      Complex v = to_double(ctx.family().minor(basis[s]));
      for (int i : basis[s]) v *= ctx.a()[static_cast<std::size_t>(i)] / f[static_cast<std::size_t>(i)];
      out[s][p] = v;
    }
  }
  return out;
}

double marked_w_relation_residual(const FlagComplex& fc, const std::vector<std::vector<Complex>>& w,
                                  double tol) {
  const auto& labels = fc.basis(fc.k() - 1);
  const std::size_t points = w.empty() ? 0 : w.front().size();
  double worst = 0;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    for (std::size_t p = 0; p < points; ++p) {
      Complex sum = 0;
      double mag = 0;
      for (int j = 0; j < fc.n(); ++j) {
        int sign = prepend_sign(j, labels[l]);
        if (sign == 0) continue;
        auto pos = fc.top().find(insert_index(labels[l], j));
        if (!pos) continue;
        sum += static_cast<double>(sign) * w[*pos][p];
        mag = std::max(mag, std::abs(w[*pos][p]));
      }
      worst = std::max(worst, std::abs(sum) / std::max(mag, 1e-300));
    }
  }
  if (worst > tol) throw ConsistencyError("marked relation residual " + std::to_string(worst));
  return worst;
}

Complex residue_form(const CriticalAlgebraModel& model, std::span<const Complex> f,
                     std::span<const Complex> g) {
  Complex s = 0;
  for (std::size_t p = 0; p < model.points.size(); ++p) {
    if (model.points[p].degenerate) throw NumericalError("residue form needs nondegenerate points");
    s += f[p] * g[p] / model.points[p].hessian;
  }
  return s;
}

}  // namespace critvar
