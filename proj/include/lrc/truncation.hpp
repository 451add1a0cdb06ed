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
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lrc/operators.hpp"
#include "lrc/types.hpp"

namespace lrc {

/// Best rank-r approximation of a symmetric matrix: keep the r eigenpairs of
/// largest eigenvalue magnitude and reconstruct. Ordering is deterministic:
/// magnitude descending, then eigenvalue descending, then the eigensolver's
/// index. Rejects inputs that are asymmetric beyond tolerance.
template <typename Scalar>
MatrixX<Scalar> truncated_eigendecomposition(const MatrixX<Scalar>& S, Index r) {
  if (r < 0) throw std::invalid_argument("truncated_eigendecomposition: negative rank");
  MatrixX<Scalar> sym = require_symmetric(S);
  Index n = sym.rows();
  if (r >= n) return sym;

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(sym);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("truncated_eigendecomposition: eigensolver failed");
  const VectorX<Scalar>& values = eig.eigenvalues();
  const MatrixX<Scalar>& vectors = eig.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    Scalar ma = std::abs(values(a)), mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return values(a) > values(b);
  });

  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(n, n);
  for (Index k = 0; k < r; ++k) {
    Index idx = order[static_cast<std::size_t>(k)];
    out.noalias() += values(idx) * vectors.col(idx) * vectors.col(idx).transpose();
  }
  return out;
}

}  // namespace lrc
