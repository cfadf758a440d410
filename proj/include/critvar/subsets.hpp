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

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace critvar {

/// Strictly increasing list of 0-based hyperplane indices.
using Subset = std::vector<int>;

/// How data-parallel kernels run. Both paths produce identical output.
enum class Execution { Serial, Parallel };

/// All p-element subsets of {0..n-1} in lexicographic order.
std::vector<Subset> combinations(int n, int p);

/// Sorts an index tuple in place and returns the sign of the sorting
/// permutation, or 0 if the tuple has a repeated index.
int sort_with_sign(std::vector<int>& tuple);

/// Sign of (j, rest...) relative to sorted order; rest must be increasing.
/// Returns 0 if j is in rest.
int prepend_sign(int j, std::span<const int> rest);

/// Set union of sorted subsets with j inserted.
Subset insert_index(const Subset& s, int j);

/// 1-based "{1,2,3}" rendering used in reports and error messages.
std::string format_subset(const Subset& s);

/// Dense lookup between a list of subsets and their positions.
class SubsetIndex {
 public:
  SubsetIndex() = default;
  explicit SubsetIndex(std::vector<Subset> subsets);

  std::size_t size() const { return subsets_.size(); }
  const Subset& operator[](std::size_t i) const { return subsets_[i]; }
  const std::vector<Subset>& subsets() const { return subsets_; }

  std::optional<std::size_t> find(const Subset& s) const;

 private:
  std::vector<Subset> subsets_;
  std::map<Subset, std::size_t> position_;
};

}  // namespace critvar
