// Copyright 2026 lrc project contributors
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

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lrc/types.hpp"
#include "lrc/vec_ops.hpp"

namespace lrc {

/// Symmetric set of observed entry positions. Stores the sorted (i,j) pairs,
/// the matching sorted column-major linear indices, and an n x n 0/1
/// indicator for entrywise filtering. The selection acting on vectorized
/// matrices is diagonal, so it is never formed as a dense n^2 x n^2 matrix.
template <typename Scalar>
struct SamplingMask {
  Index n = 0;
  std::vector<std::pair<Index, Index>> entries;  // lexicographically sorted, both orientations
  std::vector<Index> linear;                     // sorted column-major linear indices
  MatrixX<Scalar> indicator;                     // n x n, entries in {0,1}

  SamplingMask() = default;

  /// Builds the symmetric closure of `pairs`: every (i,j) also adds (j,i).
  static SamplingMask from_pairs(Index n, const std::vector<std::pair<Index, Index>>& pairs) {
    if (n <= 0) throw std::invalid_argument("SamplingMask: dimension must be positive");
    SamplingMask mask;
    mask.n = n;
    mask.indicator = MatrixX<Scalar>::Zero(n, n);
    for (const auto& [i, j] : pairs) {
      if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::out_of_range("SamplingMask: entry index out of range");
      mask.indicator(i, j) = Scalar(1);
      mask.indicator(j, i) = Scalar(1);
    }
    VecIndexMap map(n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (mask.indicator(i, j) != Scalar(0)) mask.linear.push_back(map.linear(i, j));
    std::sort(mask.linear.begin(), mask.linear.end());
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (mask.indicator(i, j) != Scalar(0)) mask.entries.emplace_back(i, j);
    return mask;
  }

  static SamplingMask full(Index n) {
    std::vector<std::pair<Index, Index>> pairs;
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j) pairs.emplace_back(i, j);
    return from_pairs(n, pairs);
  }

  static SamplingMask empty(Index n) { return from_pairs(n, {}); }

  Index cardinality() const { return static_cast<Index>(entries.size()); }
  bool is_full() const { return cardinality() == n * n; }
  bool is_empty() const { return entries.empty(); }

  bool contains(Index i, Index j) const {
    return i >= 0 && i < n && j >= 0 && j < n && indicator(i, j) != Scalar(0);
  }

  /// Zeroes every entry outside the observed set.
  MatrixX<Scalar> filter(const MatrixX<Scalar>& E) const {
    if (E.rows() != n || E.cols() != n)
      throw std::invalid_argument("SamplingMask::filter: shape mismatch");
    return E.cwiseProduct(indicator);
  }

  /// Smallest column-major linear index not in the set, or -1 if full.
  Index first_unsampled_linear() const {
    Index expected = 0;
    for (Index k : linear) {
      if (k != expected) return expected;
      ++expected;
    }
    return expected < n * n ? expected : Index(-1);
  }
};

}  // namespace lrc
