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

#include "critvar/arrangement.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

#include "critvar/errors.hpp"
#include "json.hpp"

namespace critvar {

using nlohmann::json;

ArrangementFamily::ArrangementFamily(RationalMatrix b, std::vector<std::string> labels)
    : k_(static_cast<int>(b.rows())), n_(static_cast<int>(b.cols())), b_(std::move(b)),
      labels_(std::move(labels)) {
  if (k_ < 1) throw ValidationError("k must be positive");
  if (n_ <= k_) throw ValidationError("need n > k");
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n_))
    throw ValidationError("labels must have n entries");
  for (int j = 0; j < n_; ++j) {
    bool zero = true;
    for (int i = 0; i < k_; ++i) zero = zero && coefficient(i, j) == 0;
    if (zero) throw ValidationError("zero linear form in column " + std::to_string(j + 1));
  }
  if (rank(b_) != static_cast<std::size_t>(k_))
    throw ValidationError("rank(B) < k: the forms do not span the dual space");
  b_double_.resize(static_cast<std::size_t>(k_ * n_));
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < n_; ++j) b_double_[static_cast<std::size_t>(i * n_ + j)] = to_double(coefficient(i, j));
  k_subsets_ = combinations(n_, k_);
  k_minors_.reserve(k_subsets_.size());
  for (const auto& s : k_subsets_) k_minors_.push_back(determinant(b_.select_columns(s)));
  minor_index_ = SubsetIndex(k_subsets_);
}

const Rational& ArrangementFamily::minor(const Subset& subset) const {
  auto pos = minor_index_.find(subset);
  if (!pos) throw std::invalid_argument("minor: not a sorted k-subset " + format_subset(subset));
  return k_minors_[*pos];
}

std::size_t ArrangementFamily::column_rank(const Subset& subset) const {
  return rank(b_.select_columns(subset));
}

WeightVector::WeightVector(std::vector<Rational> values) : values_(std::move(values)) {
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (values_[j] == 0) throw ValidationError("weight a_" + std::to_string(j + 1) + " is zero");
}

Rational WeightVector::infinity() const {
  Rational s = 0;
  for (const auto& v : values_) s += v;
  return -s;
}

bool WeightVector::all_positive() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& q) { return q > 0; });
}

Rational Circuit::evaluate(std::span<const Rational> x) const {
  Rational s = 0;
  for (int j : members) s += lambda[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  return s;
}

Complex Circuit::evaluate(std::span<const Complex> x) const {
  Complex s = 0;
  for (int j : members) s += to_double(lambda[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
  return s;
}

namespace {

Rational json_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational(mpz_class(std::to_string(v.get<unsigned long long>())));
    return Rational(mpz_class(std::to_string(v.get<long long>())));
  }
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

std::vector<Rational> json_rational_list(const json& doc, const char* key, std::size_t n) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != n)
    throw ParseError(std::string("field \"") + key + "\" must be an array of n entries");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(json_rational(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

int json_positive_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer())
    throw ParseError(std::string("field \"") + key + "\" must be an integer");
  long long v = doc.at(key).get<long long>();
  if (v < 1 || v > 64) throw ParseError(std::string("field \"") + key + "\" out of range");
  return static_cast<int>(v);
}

}  // namespace

ArrangementInput load_family(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  const int k = json_positive_int(doc, "k");
  const int n = json_positive_int(doc, "n");
  if (!doc.contains("B") || !doc["B"].is_array() || doc["B"].size() != static_cast<std::size_t>(k))
    throw ParseError("field \"B\" must be an array of k rows");
  RationalMatrix b(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    const json& row = doc["B"][static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw ParseError("row " + std::to_string(i) + " of \"B\" must have n entries");
    for (int j = 0; j < n; ++j)
      b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          json_rational(row[static_cast<std::size_t>(j)],
                        "B[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc["labels"];
    if (!l.is_array() || l.size() != static_cast<std::size_t>(n))
      throw ParseError("field \"labels\" must be an array of n strings");
    for (const auto& s : l) {
      if (!s.is_string()) throw ParseError("labels must be strings");
      labels.push_back(s.get<std::string>());
    }
  }
  auto weights = json_rational_list(doc, "weights", static_cast<std::size_t>(n));
  auto x = json_rational_list(doc, "x", static_cast<std::size_t>(n));
  return ArrangementInput{ArrangementFamily(std::move(b), std::move(labels)),
                          WeightVector(std::move(weights)), FiberPoint{std::move(x)}};
}

namespace {

// Circuit test for one candidate: rank |C|-1 and a full-support kernel vector.
std::optional<Circuit> circuit_candidate(const RationalMatrix& columns, const Subset& c) {
  RationalMatrix sub = columns.select_columns(c);
  Kernel ker = nullspace(sub);
  if (ker.basis.size() != 1) return std::nullopt;
  const auto& v = ker.basis.front();
  if (std::any_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; })) return std::nullopt;
  Circuit out;
  out.members = c;
  out.lambda.assign(columns.cols(), Rational(0));
  Rational scale = 1 / v.front();
  for (std::size_t i = 0; i < c.size(); ++i)
    out.lambda[static_cast<std::size_t>(c[i])] = v[i] * scale;
  return out;
}

}  // namespace

std::vector<Circuit> matroid_circuits(const RationalMatrix& columns, Execution exec) {
  const int n = static_cast<int>(columns.cols());
  const int r = static_cast<int>(rank(columns));
  std::vector<Subset> candidates;
  for (int size = 1; size <= std::min(n, r + 1); ++size) {
    auto c = combinations(n, size);
    candidates.insert(candidates.end(), c.begin(), c.end());
  }
  std::vector<std::optional<Circuit>> slots(candidates.size());
  const long count = static_cast<long>(candidates.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i)
      slots[static_cast<std::size_t>(i)] = circuit_candidate(columns, candidates[static_cast<std::size_t>(i)]);
  } else {
    for (long i = 0; i < count; ++i)
      slots[static_cast<std::size_t>(i)] = circuit_candidate(columns, candidates[static_cast<std::size_t>(i)]);
  }
  std::vector<Circuit> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  std::sort(out.begin(), out.end(),
            [](const Circuit& a, const Circuit& b) { return a.members < b.members; });
  return out;
}

std::vector<Subset> matroid_independent_subsets(const RationalMatrix& columns, int p,
                                                Execution exec) {
  const int n = static_cast<int>(columns.cols());
  if (p < 0 || p > static_cast<int>(columns.rows()))
    throw std::out_of_range("independent_subsets: p out of range");
  auto candidates = combinations(n, p);
  std::vector<char> keep(candidates.size(), 0);
  const long count = static_cast<long>(candidates.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      const auto& s = candidates[static_cast<std::size_t>(i)];
      keep[static_cast<std::size_t>(i)] = rank(columns.select_columns(s)) == s.size();
    }
  } else {
    for (long i = 0; i < count; ++i) {
      const auto& s = candidates[static_cast<std::size_t>(i)];
      keep[static_cast<std::size_t>(i)] = rank(columns.select_columns(s)) == s.size();
    }
  }
  std::vector<Subset> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.push_back(std::move(candidates[i]));
  return out;
}

std::vector<Subset> independent_subsets(const ArrangementFamily& family, int p, Execution exec) {
  if (p < 0 || p > family.k()) throw std::out_of_range("independent_subsets: p out of range");
  return matroid_independent_subsets(family.b(), p, exec);
}

std::vector<Circuit> circuits(const ArrangementFamily& family, Execution exec) {
  return matroid_circuits(family.b(), exec);
}

DiscriminantReport discriminant_membership(std::span<const Circuit> circuits,
                                           std::span<const Rational> x) {
  DiscriminantReport r;
  for (const auto& c : circuits)
    if (c.evaluate(x) == 0) r.violating.push_back(c.members);
  r.on = !r.violating.empty();
  return r;
}

DiscriminantReport discriminant_membership(std::span<const Circuit> circuits,
                                           std::span<const Complex> x, double tol) {
  DiscriminantReport r;
  for (const auto& c : circuits)
    if (std::abs(c.evaluate(x)) <= tol) r.violating.push_back(c.members);
  r.on = !r.violating.empty();
  return r;
}

void require_off_discriminant(std::span<const Circuit> circuits, std::span<const Rational> x) {
  auto r = discriminant_membership(circuits, x);
  if (r.on) throw DiscriminantError("x on discriminant: circuit " + format_subset(r.violating.front()));
}

long euler_characteristic(const ArrangementFamily& family) {
  long chi = 0;
  for (int p = 0; p <= family.k(); ++p) {
    long count = static_cast<long>(independent_subsets(family, p).size());
    chi += (p % 2 == 0 ? count : -count);
  }
  return chi;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

UnbalanceReport is_unbalanced(const ArrangementFamily& family, const WeightVector& a,
                              const FiberPoint& x, int cap) {
  UnbalanceReport report;
  if (a.all_positive()) {
    report.unbalanced = true;
    report.shortcut = true;
    return report;
  }
  const int n = family.n();
  const int k = family.k();
  if (n > cap)
    throw ValidationError("dense-edge enumeration is capped at n <= " + std::to_string(cap));

  // Homogenized normals: H_j -> (x_j, b_j), H_inf -> (1, 0, ..., 0) in C^{k+1}.
  RationalMatrix cols(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(n + 1));
  for (int j = 0; j < n; ++j) {
    cols(0, static_cast<std::size_t>(j)) = x.values[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i)
      cols(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j)) = family.coefficient(i, j);
  }
  cols(0, static_cast<std::size_t>(n)) = 1;

  auto proj_circuits = matroid_circuits(cols, Execution::Serial);
  std::vector<Rational> weight(static_cast<std::size_t>(n + 1));
  for (int j = 0; j < n; ++j) weight[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
  weight[static_cast<std::size_t>(n)] = a.infinity();

  // Edges of the projective closure are flats of rank 1..k (nonempty
  // projective intersection); each is the closure of an independent set.
  std::set<Subset> flats;
  for (int p = 1; p <= k; ++p) {
    for (const auto& s : matroid_independent_subsets(cols, p, Execution::Serial)) {
      Subset closure;
      for (int e = 0; e <= n; ++e) {
        if (std::binary_search(s.begin(), s.end(), e) ||
            rank(cols.select_columns(insert_index(s, e))) == s.size())
          closure.push_back(e);
      }
      flats.insert(std::move(closure));
    }
  }

  report.unbalanced = true;
  for (const auto& flat : flats) {
    UnionFind uf(n + 1);
    for (const auto& c : proj_circuits) {
      if (!std::includes(flat.begin(), flat.end(), c.members.begin(), c.members.end())) continue;
      for (std::size_t i = 1; i < c.members.size(); ++i) uf.unite(c.members[0], c.members[i]);
    }
    bool connected = true;
    for (std::size_t i = 1; i < flat.size(); ++i) connected = connected && uf.find(flat[i]) == uf.find(flat[0]);
    if (!connected) continue;
    Rational w = 0;
    for (int e : flat) w += weight[static_cast<std::size_t>(e)];
    if (w == 0) report.unbalanced = false;
    report.dense_edges.push_back(DenseEdge{flat, w});
  }
  return report;
}

}  // namespace critvar
