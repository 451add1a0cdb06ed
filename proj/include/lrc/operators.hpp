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
#include <stdexcept>
#include <utility>

#include "lrc/linear_operator.hpp"
#include "lrc/sampling_mask.hpp"
#include "lrc/types.hpp"
#include "lrc/vec_ops.hpp"

// Matrix-free maps on vectorized n x n matrices: the transpose permutation,
// the sampling selection, the tangent-plane and symmetry projectors, the
// Kronecker sum, and the two one-step error propagators built from them
// (plain and projected). Each map comes as a free function and as a
// LinearOperator factory that precomputes its captured state.

namespace lrc {

inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-10;

/// I - U U^T. Throws if U^T U deviates from the identity beyond tolerance.
template <typename Scalar>
MatrixX<Scalar> complement_projector(const MatrixX<Scalar>& U, Index n) {
  if (U.rows() != n || U.cols() > n)
    throw std::invalid_argument("complement_projector: U must be n x r with r <= n");
  MatrixX<Scalar> gram = U.transpose() * U;
  Scalar deviation = (gram - MatrixX<Scalar>::Identity(U.cols(), U.cols())).norm();
  if (deviation > Scalar(kOrthonormalityTol))
    throw std::invalid_argument("complement_projector: columns of U are not orthonormal");
  return MatrixX<Scalar>::Identity(n, n) - U * U.transpose();
}

/// Symmetric part of M; throws if M deviates from symmetry beyond the
/// relative tolerance.
template <typename Scalar>
MatrixX<Scalar> require_symmetric(const MatrixX<Scalar>& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("require_symmetric: matrix not square");
  Scalar asym = (M - M.transpose()).norm();
  if (asym > Scalar(kSymmetryTol) * M.norm())
    throw std::invalid_argument("require_symmetric: asymmetry above tolerance");
  return ((M + M.transpose()) / Scalar(2)).eval();
}

// --- transpose permutation: vec(E) -> vec(E^T) -------------------------------

template <typename Scalar>
VectorX<Scalar> transpose_apply(const VectorX<Scalar>& e) {
  Index n = square_dim(e.size());
  VecIndexMap map(n);
  VectorX<Scalar> out(e.size());
  for (Index k = 0; k < e.size(); ++k) out(k) = e(map.transposed(k));
  return out;
}

template <typename Scalar>
LinearOperator<Scalar> transpose_permutation(Index n) {
  VecIndexMap map(n);
  return {map.dim(), OperatorKind::Transpose,
          [](const VectorX<Scalar>& e) { return transpose_apply(e); }};
}

// --- sampling selection: zero every coordinate outside the observed set -----

template <typename Scalar>
VectorX<Scalar> mask_apply(const SamplingMask<Scalar>& mask, const VectorX<Scalar>& e) {
  if (e.size() != mask.n * mask.n)
    throw std::invalid_argument("mask_apply: vector length does not match mask dimension");
  VectorX<Scalar> out = VectorX<Scalar>::Zero(e.size());
  for (Index k : mask.linear) out(k) = e(k);
  return out;
}

template <typename Scalar>
LinearOperator<Scalar> mask_operator(const SamplingMask<Scalar>& mask) {
  return {mask.n * mask.n, OperatorKind::Mask,
          [mask](const VectorX<Scalar>& e) { return mask_apply(mask, e); }};
}

// --- projectors --------------------------------------------------------------

/// Orthogonal projection onto the tangent plane of the rank-r set at
/// U diag(.) U^T, acting on vectorized matrices: E -> E - Q E Q with
/// Q = I - U U^T.
template <typename Scalar>
VectorX<Scalar> proj_tangent_apply(const MatrixX<Scalar>& U, const VectorX<Scalar>& e) {
  Index n = square_dim(e.size());
  MatrixX<Scalar> Q = complement_projector(U, n);
  MatrixX<Scalar> E = unvec_matrix(e, n);
  return vec_matrix((E - Q * E * Q).eval());
}

template <typename Scalar>
LinearOperator<Scalar> tangent_projector(const MatrixX<Scalar>& U, Index n) {
  MatrixX<Scalar> Q = complement_projector(U, n);
  return {n * n, OperatorKind::TangentProjector,
          [Q = std::move(Q), n](const VectorX<Scalar>& e) {
            MatrixX<Scalar> E = unvec_matrix(e, n);
            return vec_matrix((E - Q * E * Q).eval());
          }};
}

/// Orthogonal projection onto symmetric matrices: E -> (E + E^T)/2.
template <typename Scalar>
VectorX<Scalar> proj_sym_apply(const VectorX<Scalar>& e) {
  Index n = square_dim(e.size());
  MatrixX<Scalar> E = unvec_matrix(e, n);
  return vec_matrix(((E + E.transpose()) / Scalar(2)).eval());
}

template <typename Scalar>
LinearOperator<Scalar> symmetrizer(Index n) {
  return {n * n, OperatorKind::Symmetrizer,
          [](const VectorX<Scalar>& e) { return proj_sym_apply(e); }};
}

/// Product of the two commuting projectors above (symmetrize, then project
/// onto the tangent plane). Projects onto the symmetric tangent directions a
/// feasible error matrix can move along to first order.
template <typename Scalar>
VectorX<Scalar> proj_feasible_apply(const MatrixX<Scalar>& U, const VectorX<Scalar>& e) {
  return proj_tangent_apply(U, proj_sym_apply(e));
}

template <typename Scalar>
LinearOperator<Scalar> feasible_projector(const MatrixX<Scalar>& U, Index n) {
  MatrixX<Scalar> Q = complement_projector(U, n);
  return {n * n, OperatorKind::FeasibleProjector,
          [Q = std::move(Q), n](const VectorX<Scalar>& e) {
            MatrixX<Scalar> E = unvec_matrix(e, n);
            MatrixX<Scalar> S = (E + E.transpose()) / Scalar(2);
            return vec_matrix((S - Q * S * Q).eval());
          }};
}

// --- Kronecker sum: vec(E) -> vec(M E + E M) for symmetric M ----------------

template <typename Scalar>
VectorX<Scalar> kron_sum_apply(const MatrixX<Scalar>& M, const VectorX<Scalar>& e) {
  MatrixX<Scalar> Msym = require_symmetric(M);
  MatrixX<Scalar> E = unvec_matrix(e, Msym.rows());
  return vec_matrix((Msym * E + E * Msym).eval());
}

template <typename Scalar>
LinearOperator<Scalar> kron_sum_operator(const MatrixX<Scalar>& M) {
  MatrixX<Scalar> Msym = require_symmetric(M);
  Index n = Msym.rows();
  return {n * n, OperatorKind::KronSum,
          [Msym = std::move(Msym), n](const VectorX<Scalar>& e) {
            MatrixX<Scalar> E = unvec_matrix(e, n);
            return vec_matrix((Msym * E + E * Msym).eval());
          }};
}

// --- one-step error propagators ----------------------------------------------

/// Linearization of one gradient step acting on the vectorized error:
/// vec(E) -> vec(E - eta*(M Z + Z M)) with Z the observed part of E.
/// A coordinate supported entirely off the observed set is a fixed point,
/// exactly: Z is then the zero matrix and no rounding occurs.
template <typename Scalar>
VectorX<Scalar> update_apply(const MatrixX<Scalar>& M, const SamplingMask<Scalar>& mask,
                             Scalar eta, const VectorX<Scalar>& e) {
  if (eta < Scalar(0)) throw std::invalid_argument("update_apply: step size must be nonnegative");
  MatrixX<Scalar> Msym = require_symmetric(M);
  if (mask.n != Msym.rows()) throw std::invalid_argument("update_apply: mask/matrix dimension mismatch");
  MatrixX<Scalar> E = unvec_matrix(e, mask.n);
  MatrixX<Scalar> Z = mask.filter(E);
  return vec_matrix((E - eta * (Msym * Z + Z * Msym)).eval());
}

template <typename Scalar>
LinearOperator<Scalar> update_map(const MatrixX<Scalar>& M, const SamplingMask<Scalar>& mask,
                                  Scalar eta) {
  if (eta < Scalar(0)) throw std::invalid_argument("update_map: step size must be nonnegative");
  MatrixX<Scalar> Msym = require_symmetric(M);
  if (mask.n != Msym.rows()) throw std::invalid_argument("update_map: mask/matrix dimension mismatch");
  Index n = mask.n;
  return {n * n, OperatorKind::UpdateMap,
          [Msym = std::move(Msym), mask, eta, n](const VectorX<Scalar>& e) {
            MatrixX<Scalar> E = unvec_matrix(e, n);
            MatrixX<Scalar> Z = mask.filter(E);
            return vec_matrix((E - eta * (Msym * Z + Z * Msym)).eval());
          }};
}

/// The update map conjugated by the feasible projector. Its spectral radius
/// is the predicted asymptotic linear rate of the factorized descent.
template <typename Scalar>
VectorX<Scalar> projected_update_apply(const MatrixX<Scalar>& U, const MatrixX<Scalar>& M,
                                       const SamplingMask<Scalar>& mask, Scalar eta,
                                       const VectorX<Scalar>& e) {
  return proj_feasible_apply(U, update_apply(M, mask, eta, proj_feasible_apply(U, e)));
}

template <typename Scalar>
LinearOperator<Scalar> projected_update_map(const MatrixX<Scalar>& U, const MatrixX<Scalar>& M,
                                            const SamplingMask<Scalar>& mask, Scalar eta) {
  LinearOperator<Scalar> project = feasible_projector(U, mask.n);
  LinearOperator<Scalar> update = update_map(M, mask, eta);
  return {mask.n * mask.n, OperatorKind::ProjectedUpdateMap,
          [project = std::move(project), update = std::move(update)](const VectorX<Scalar>& e) {
            return project(update(project(e)));
          }};
}

}  // namespace lrc
