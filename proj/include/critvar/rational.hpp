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

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace critvar {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Parses "p", "-p" or "p/q" (canonicalized). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline Complex to_complex(const Rational& value) { return {value.get_d(), 0.0}; }

std::vector<Complex> to_complex(std::span<const Rational> values);

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<Rational> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Rational> values);
  RationalMatrix select_columns(std::span<const int> cols) const;

  RationalMatrix transpose() const;
  bool is_zero() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const Rational& s, const RationalMatrix& m);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

  std::vector<Rational> apply(std::span<const Rational> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form with the list of pivot columns.
struct EchelonForm {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

EchelonForm row_reduce(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Basis of {v : m v = 0}. The vector for free column f has a 1 at f and
/// zeros at the other free columns, so coordinates of any kernel element
/// in this basis are its entries at the free columns.
struct Kernel {
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> free_columns;
};

Kernel nullspace(const RationalMatrix& m);

Rational determinant(RationalMatrix m);

/// Solves a x = b for square nonsingular a. Throws std::domain_error if singular.
RationalMatrix solve(RationalMatrix a, RationalMatrix b);

}  // namespace critvar
