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

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "lrc/types.hpp"

namespace lrc {

/// Index bookkeeping for the column-major stacking of an n x n matrix into a
/// length-n^2 vector. All indices are 0-based; entry (i,j) of the matrix sits
/// at linear position i + j*n of the vector.
struct VecIndexMap {
  Index n;

  explicit VecIndexMap(Index n_) : n(n_) {
    if (n <= 0) throw std::invalid_argument("VecIndexMap: dimension must be positive");
  }

  Index dim() const { return n * n; }

  Index linear(Index i, Index j) const {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::out_of_range("VecIndexMap: entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside " + std::to_string(n) +
                              "x" + std::to_string(n));
    return i + j * n;
  }

  std::pair<Index, Index> entry(Index k) const {
    if (k < 0 || k >= dim()) throw std::out_of_range("VecIndexMap: linear index out of range");
    return {k % n, k / n};
  }

  /// Linear index of the transposed entry: (i,j) -> (j,i).
  Index transposed(Index k) const {
    auto [i, j] = entry(k);
    return j + i * n;
  }
};

/// Side length of a square matrix stacked into a vector of length `size`.
inline Index square_dim(Index size) {
  Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(size))));
  while (n * n < size) ++n;
  while (n > 0 && n * n > size) --n;
  if (n <= 0 || n * n != size)
    throw std::invalid_argument("vector length " + std::to_string(size) +
                                " is not a perfect square");
  return n;
}

/// Column-major stacking of a square matrix.
template <typename Derived>
VectorX<typename Derived::Scalar> vec_matrix(const Eigen::MatrixBase<Derived>& E) {
  using Scalar = typename Derived::Scalar;
  if (E.rows() != E.cols())
    throw std::invalid_argument("vec_matrix: input must be square");
  VectorX<Scalar> v(E.size());
  Eigen::Map<MatrixX<Scalar>>(v.data(), E.rows(), E.cols()) = E;
  return v;
}

/// Inverse of vec_matrix.
template <typename Derived>
MatrixX<typename Derived::Scalar> unvec_matrix(const Eigen::MatrixBase<Derived>& e, Index n) {
  using Scalar = typename Derived::Scalar;
  if (e.cols() != 1) throw std::invalid_argument("unvec_matrix: expected a column vector");
  if (e.size() != n * n)
    throw std::invalid_argument("unvec_matrix: length " + std::to_string(e.size()) +
                                " does not match n=" + std::to_string(n));
  VectorX<Scalar> v = e;
  return Eigen::Map<const MatrixX<Scalar>>(v.data(), n, n);
}

template <typename Derived>
MatrixX<typename Derived::Scalar> unvec_matrix(const Eigen::MatrixBase<Derived>& e) {
  return unvec_matrix(e, square_dim(e.size()));
}

}  // namespace lrc
