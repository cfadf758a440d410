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

// Reference computations written independently of the library: integer
// fraction-free elimination for ranks, brute-force circuits, the L_C rule
// applied to every admissible ordering of a basis tuple, and the Hessian
// as the determinant of the explicit second-derivative matrix.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <map>
#include <vector>

namespace oracle {

using IntMatrix = std::vector<std::vector<long long>>;  // k rows, n columns
using Tuple = std::vector<int>;

/// Rank of the columns `cols` of m by Bareiss elimination in __int128.
inline int rank_of(const IntMatrix& m, const Tuple& cols) {
  const std::size_t rows = m.size();
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols.size()));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) a[r][c] = m[r][static_cast<std::size_t>(cols[c])];
  int rank = 0;
  __int128 prev = 1;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols.size() && row < rows; ++c) {
    std::size_t piv = row;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      for (std::size_t cc = c + 1; cc < cols.size(); ++cc)
        a[r][cc] = (a[row][c] * a[r][cc] - a[r][c] * a[row][cc]) / prev;
      a[r][c] = 0;
    }
    prev = a[row][c];
    ++row;
    ++rank;
  }
  return rank;
}

/// Integer determinant of a square column selection (Laplace expansion).
inline long long det_of(const IntMatrix& m, const Tuple& cols) {
  const std::size_t k = cols.size();
  if (k == 1) return m[0][static_cast<std::size_t>(cols[0])];
  // expand along the last row using recursion on the top k-1 rows
  IntMatrix top(m.begin(), m.begin() + static_cast<long>(k - 1));
  long long sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    Tuple rest;
    for (std::size_t d = 0; d < k; ++d)
      if (d != c) rest.push_back(cols[d]);
    long long sign = ((k - 1 + c) % 2 == 0) ? 1 : -1;
    sum += sign * m[k - 1][static_cast<std::size_t>(cols[c])] * det_of(top, rest);
  }
  return sum;
}

inline std::vector<Tuple> subsets(int n, int p) {
  std::vector<Tuple> out;
  Tuple cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == p) {
      out.push_back(cur);
      return;
    }
    for (int j = start; j < n; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline long chi(const IntMatrix& b) {
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  long total = 0;
  for (int p = 0; p <= k; ++p) {
    long count = 0;
    for (const auto& s : subsets(n, p))
      if (rank_of(b, s) == p) ++count;
    total += (p % 2 == 0 ? count : -count);
  }
  return total;
}

/// Minimal dependent subsets: dependent, and every one-smaller subset independent.
inline std::vector<Tuple> circuits(const IntMatrix& b) {
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  std::vector<Tuple> out;
  for (int size = 1; size <= std::min(n, k + 1); ++size) {
    for (const auto& s : subsets(n, size)) {
      if (rank_of(b, s) == size) continue;
      bool minimal = true;
      for (std::size_t drop = 0; drop < s.size() && minimal; ++drop) {
        Tuple t;
        for (std::size_t i = 0; i < s.size(); ++i)
          if (i != drop) t.push_back(s[i]);
        minimal = rank_of(b, t) == static_cast<int>(t.size());
      }
      if (minimal) out.push_back(s);
    }
  }
  return out;
}

inline int permutation_sign(const Tuple& t) {
  int inversions = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j]) return 0;
      if (t[i] > t[j]) ++inversions;
    }
  return inversions % 2 == 0 ? 1 : -1;
}

/// L_C on the standard basis (independent sorted k-tuples), built by
/// trying every ordering of each basis tuple and applying the rule to
/// the orderings that list C - {i_m} first in circuit order. Every such
/// ordering must give the same column; `consistent` reports whether it did.
inline std::vector<std::vector<double>> l_c(const IntMatrix& b, const std::vector<double>& a,
                                            const Tuple& circuit, bool& consistent) {
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  std::vector<Tuple> basis;
  for (const auto& s : subsets(n, k))
    if (rank_of(b, s) == k) basis.push_back(s);
  std::map<Tuple, std::size_t> position;
  for (std::size_t i = 0; i < basis.size(); ++i) position[basis[i]] = i;
  const std::size_t r = circuit.size();
  std::vector<std::vector<double>> out(basis.size(), std::vector<double>(basis.size(), 0.0));
  consistent = true;

  for (std::size_t col = 0; col < basis.size(); ++col) {
    bool seen = false;
    std::vector<double> first;
    Tuple perm = basis[col];
    std::sort(perm.begin(), perm.end());
    do {
      for (std::size_t m = 0; m < r; ++m) {
        if (r - 1 > perm.size()) break;
        bool prefix = true;
        std::size_t q = 0;
        for (std::size_t l = 0; l < r; ++l) {
          if (l == m) continue;
          if (perm[q++] != circuit[l]) prefix = false;
        }
        if (!prefix) continue;
        Tuple s(perm.begin() + static_cast<long>(r - 1), perm.end());
        // F(sorted) = sign(perm) F(perm)
        std::vector<double> column(basis.size(), 0.0);
        const double outer = permutation_sign(perm) * ((m + 1) % 2 == 0 ? 1.0 : -1.0);
        for (std::size_t l = 0; l < r; ++l) {
          Tuple image;
          for (std::size_t q2 = 0; q2 < r; ++q2)
            if (q2 != l) image.push_back(circuit[q2]);
          image.insert(image.end(), s.begin(), s.end());
          int sign = permutation_sign(image);
          if (sign == 0) continue;
          Tuple sorted = image;
          std::sort(sorted.begin(), sorted.end());
          auto it = position.find(sorted);
          if (it == position.end()) continue;
          column[it->second] += outer * sign * ((l + 1) % 2 == 0 ? 1.0 : -1.0) * a[static_cast<std::size_t>(circuit[l])];
        }
        if (!seen) {
          first = column;
          seen = true;
        } else if (column != first) {
          consistent = false;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen)
      for (std::size_t row = 0; row < basis.size(); ++row) out[row][col] = first[row];
  }
  return out;
}

/// det of -sum_j a_j b_j b_j^T / f_j(u)^2, built entry by entry.
inline std::complex<double> hessian_det(const IntMatrix& b, const std::vector<double>& a,
                                        const std::vector<double>& x,
                                        const std::vector<std::complex<double>>& u) {
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
  for (int j = 0; j < n; ++j) {
    std::complex<double> f = x[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) f += static_cast<double>(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * u[static_cast<std::size_t>(i)];
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        h(i, l) -= a[static_cast<std::size_t>(j)] * static_cast<double>(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) / (f * f);
  }
  return h.determinant();
}

/// Gradient of sum a_j log f_j(u), direct.
inline std::vector<std::complex<double>> gradient(const IntMatrix& b, const std::vector<double>& a,
                                                  const std::vector<double>& x,
                                                  const std::vector<std::complex<double>>& u) {
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  std::vector<std::complex<double>> g(static_cast<std::size_t>(k));
  for (int j = 0; j < n; ++j) {
    std::complex<double> f = x[static_cast<std::size_t>(j)];
    for (int i = 0; i < k; ++i) f += static_cast<double>(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * u[static_cast<std::size_t>(i)];
    for (int i = 0; i < k; ++i) g[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(j)] * static_cast<double>(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / f;
  }
  return g;
}

}  // namespace oracle
