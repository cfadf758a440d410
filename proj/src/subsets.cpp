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

#include "critvar/subsets.hpp"

#include <algorithm>

namespace critvar {

std::vector<Subset> combinations(int n, int p) {
  std::vector<Subset> out;
  if (p < 0 || p > n) return out;
  Subset cur(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - p + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int l = i + 1; l < p; ++l)
      cur[static_cast<std::size_t>(l)] = cur[static_cast<std::size_t>(l - 1)] + 1;
  }
  return out;
}

int sort_with_sign(std::vector<int>& tuple) {
  int sign = 1;
  // insertion sort; tuples are at most k long
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t l = i; l > 0 && tuple[l - 1] >= tuple[l]; --l) {
      if (tuple[l - 1] == tuple[l]) return 0;
      std::swap(tuple[l - 1], tuple[l]);
      sign = -sign;
    }
  }
  return sign;
}

int prepend_sign(int j, std::span<const int> rest) {
  int smaller = 0;
  for (int r : rest) {
    if (r == j) return 0;
    if (r < j) ++smaller;
  }
  return smaller % 2 == 0 ? 1 : -1;
}

Subset insert_index(const Subset& s, int j) {
  Subset out = s;
  out.insert(std::lower_bound(out.begin(), out.end(), j), j);
  return out;
}

std::string format_subset(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

SubsetIndex::SubsetIndex(std::vector<Subset> subsets) : subsets_(std::move(subsets)) {
  for (std::size_t i = 0; i < subsets_.size(); ++i) position_.emplace(subsets_[i], i);
}

std::optional<std::size_t> SubsetIndex::find(const Subset& s) const {
  auto it = position_.find(s);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

}  // namespace critvar
