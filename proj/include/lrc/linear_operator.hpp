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

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "lrc/types.hpp"

namespace lrc {

enum class OperatorKind {
  Identity,
  Mask,
  Transpose,
  TangentProjector,
  Symmetrizer,
  FeasibleProjector,
  KronSum,
  UpdateMap,
  ProjectedUpdateMap,
  Composite,
};

inline const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Identity: return "identity";
    case OperatorKind::Mask: return "mask";
    case OperatorKind::Transpose: return "transpose";
    case OperatorKind::TangentProjector: return "tangent-projector";
    case OperatorKind::Symmetrizer: return "symmetrizer";
    case OperatorKind::FeasibleProjector: return "feasible-projector";
    case OperatorKind::KronSum: return "kron-sum";
    case OperatorKind::UpdateMap: return "update-map";
    case OperatorKind::ProjectedUpdateMap: return "projected-update-map";
    case OperatorKind::Composite: return "composite";
  }
  return "unknown";
}

/// Linear map on vectorized n x n matrices (dimension n^2) with a matrix-free
/// apply. Immutable after construction; apply is pure and safe to call from
/// concurrent threads.
template <typename Scalar>
struct LinearOperator {
  Index dim = 0;
  OperatorKind kind = OperatorKind::Composite;
  std::function<VectorX<Scalar>(const VectorX<Scalar>&)> apply;

  VectorX<Scalar> operator()(const VectorX<Scalar>& e) const {
    if (e.size() != dim)
      throw std::invalid_argument(std::string(to_string(kind)) + " operator: expected length " +
                                  std::to_string(dim) + ", got " + std::to_string(e.size()));
    return apply(e);
  }
};

template <typename Scalar>
LinearOperator<Scalar> identity_operator(Index dim) {
  return {dim, OperatorKind::Identity, [](const VectorX<Scalar>& e) { return e; }};
}

/// compose(f, g) applies g first, then f.
template <typename Scalar>
LinearOperator<Scalar> compose(LinearOperator<Scalar> outer, LinearOperator<Scalar> inner) {
  if (outer.dim != inner.dim)
    throw std::invalid_argument("compose: operator dimensions differ");
  Index dim = outer.dim;
  return {dim, OperatorKind::Composite,
          [outer = std::move(outer), inner = std::move(inner)](const VectorX<Scalar>& e) {
            return outer(inner(e));
          }};
}

inline constexpr Index kDefaultDenseCap = 4096;

struct DenseCapExceeded : std::runtime_error {
  explicit DenseCapExceeded(Index dim, Index cap)
      : std::runtime_error("dense materialization of dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(cap) +
                           "; use the matrix-free path") {}
};

/// Dense matrix of the operator: column j is the image of basis vector j.
template <typename Scalar>
MatrixX<Scalar> materialize(const LinearOperator<Scalar>& op, Index dense_cap = kDefaultDenseCap) {
  if (op.dim > dense_cap) throw DenseCapExceeded(op.dim, dense_cap);
  MatrixX<Scalar> dense(op.dim, op.dim);
  VectorX<Scalar> basis = VectorX<Scalar>::Zero(op.dim);
  for (Index j = 0; j < op.dim; ++j) {
    basis(j) = Scalar(1);
    dense.col(j) = op(basis);
    basis(j) = Scalar(0);
  }
  return dense;
}

}  // namespace lrc
