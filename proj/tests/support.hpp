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

#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "critvar/arrangement.hpp"

namespace support {

inline std::string data_path(const std::string& name) { return std::string(CRITVAR_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline critvar::ArrangementInput load(const std::string& name) { return critvar::load_family(slurp(data_path(name))); }

inline critvar::Rational q(const char* s) { return critvar::parse_rational(s); }

inline std::vector<critvar::Rational> qs(std::initializer_list<const char*> v) {
  std::vector<critvar::Rational> out;
  for (const char* s : v) out.push_back(q(s));
  return out;
}

inline double dist(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace support
