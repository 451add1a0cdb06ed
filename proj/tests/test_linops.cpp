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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "lrc/linear_operator.hpp"
#include "lrc/operators.hpp"
#include "lrc/problem.hpp"
#include "lrc/rng.hpp"
#include "oracles.hpp"

using lrc::Index;
using Mat = lrc::MatrixX<double>;
using Vec = lrc::VectorX<double>;
using Mask = lrc::SamplingMask<double>;

namespace {

Mat random_orthonormal(Index n, Index r, std::uint64_t seed) {
  return lrc::generate_instance<double>(n, r, seed).U;
}

Mask random_mask(Index n, double p, std::uint64_t seed) {
  return lrc::sample_bernoulli_symmetric<double>(n, p, seed);
}

}  // namespace

TEST_CASE("mask zeroes unobserved coordinates and nothing else") {
  Vec e(4);
  e << 1, 3, 2, 4;

  CHECK(lrc::mask_apply(Mask::full(2), e) == e);
  CHECK(lrc::mask_apply(Mask::empty(2), e).isZero(0.0));

  Mask corner = Mask::from_pairs(2, {{0, 0}});
  Vec expected(4);
  expected << 1, 0, 0, 0;
  CHECK(lrc::mask_apply(corner, e) == expected);

  CHECK_THROWS_AS(lrc::mask_apply(corner, Vec::Zero(9).eval()), std::invalid_argument);
}

TEST_CASE("masked linear indices agree between row-major and column-major conventions") {
  // The sampling set is symmetric, so {i*n+j} and {i+j*n} describe the same
  // index set even though they stack in opposite orders.
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Mask mask = random_mask(6, 0.4, seed);
    std::set<Index> row_major, col_major;
    for (const auto& [i, j] : mask.entries) {
      row_major.insert(i * mask.n + j);
      col_major.insert(i + j * mask.n);
    }
    CHECK(row_major == col_major);
    CHECK(std::vector<Index>(col_major.begin(), col_major.end()) == mask.linear);
  }
}

TEST_CASE("tangent projector fixes the column space and kills the normal space") {
  auto rng = lrc::make_rng(21, lrc::Stream::Sweep);
  Index n = 5, r = 2;
  Mat U = random_orthonormal(n, r, 3);
  Mat Q = lrc::complement_projector(U, n);

  // square orthogonal U: nothing to project away
  Mat Ufull = random_orthonormal(n, n, 4);
  Vec e = lrc::gaussian_vector<double>(n * n, rng);
  CHECK((lrc::proj_tangent_apply(Ufull, e) - e).norm() <= 1e-12 * e.norm());

  // pure normal-space matrices are annihilated
  Mat Z = lrc::gaussian_matrix<double>(n, n, rng);
  Vec normal = lrc::vec_matrix((Q * Z * Q).eval());
  CHECK(lrc::proj_tangent_apply(U, normal).norm() <= 1e-12 * normal.norm());

  // anything of the form U * W is untouched
  Mat W = lrc::gaussian_matrix<double>(r, n, rng);
  Vec inplane = lrc::vec_matrix((U * W).eval());
  CHECK((lrc::proj_tangent_apply(U, inplane) - inplane).norm() <= 1e-12 * inplane.norm());
}

TEST_CASE("tangent projector rejects non-orthonormal U") {
  Mat U = Mat::Ones(4, 2);
  CHECK_THROWS_AS(lrc::tangent_projector(U, 4), std::invalid_argument);
}

TEST_CASE("symmetrizer examples") {
  auto rng = lrc::make_rng(22, lrc::Stream::Sweep);
  Index n = 4;
  Mat Z = lrc::gaussian_matrix<double>(n, n, rng);

  Vec skew = lrc::vec_matrix((Z - Z.transpose()).eval());
  CHECK(lrc::proj_sym_apply(skew).norm() <= 1e-12 * skew.norm());

  Vec sym = lrc::vec_matrix((Z + Z.transpose()).eval());
  CHECK((lrc::proj_sym_apply(sym) - sym).norm() <= 1e-12 * sym.norm());

  Vec e = Vec::Zero(4);
  e(1) = 1;  // vec of e_2 e_1^T at n=2
  Vec expected(4);
  expected << 0, 0.5, 0.5, 0;
  CHECK(lrc::proj_sym_apply(e) == expected);
}

TEST_CASE("combined projector commutes and annihilates skew matrices") {
  auto rng = lrc::make_rng(23, lrc::Stream::Sweep);
  for (Index n : {3, 5}) {
    Mat U = random_orthonormal(n, 2, 17 + n);
    for (int trial = 0; trial < 20; ++trial) {
      Vec e = lrc::gaussian_vector<double>(n * n, rng);
      Vec order_a = lrc::proj_tangent_apply(U, lrc::proj_sym_apply(e));
      Vec order_b = lrc::proj_sym_apply(lrc::proj_tangent_apply(U, e));
      CHECK((order_a - order_b).norm() <= 1e-12 * e.norm());
    }
    Mat Z = lrc::gaussian_matrix<double>(n, n, rng);
    Vec skew = lrc::vec_matrix((Z - Z.transpose()).eval());
    CHECK(lrc::proj_feasible_apply(U, skew).norm() <= 1e-12 * skew.norm());
  }
}

TEST_CASE("feasible errors sit near the projector's range") {
  auto inst = lrc::generate_instance<double>(6, 2, 5);
  auto rng = lrc::make_rng(24, lrc::Stream::Sweep);
  Mat G = lrc::gaussian_matrix<double>(6, 2, rng);
  G /= G.norm();
  double delta = 1e-4;
  Mat X = inst.Xstar + delta * G;
  Vec e = lrc::vec_matrix((X * X.transpose() - inst.M).eval());
  // residual is second order in the perturbation, far below the error norm
  CHECK((e - lrc::proj_feasible_apply(inst.U, e)).norm() <= 1e-2 * e.norm());
}

TEST_CASE("kron sum acts as E -> ME + EM") {
  auto rng = lrc::make_rng(25, lrc::Stream::Sweep);
  Index n = 4;
  Vec e = lrc::gaussian_vector<double>(n * n, rng);
  CHECK((lrc::kron_sum_apply(Mat::Identity(n, n).eval(), e) - 2 * e).norm() <= 1e-14 * e.norm());

  Vec lambda(3);
  lambda << 3, 2, 1;
  Mat D = lambda.asDiagonal();
  Mat Eij = Mat::Zero(3, 3);
  Eij(0, 2) = 1;  // eigen-direction of the sum with eigenvalue lambda_0 + lambda_2
  Vec v = lrc::vec_matrix(Eij);
  CHECK((lrc::kron_sum_apply(D, v) - (lambda(0) + lambda(2)) * v).norm() <= 1e-14);

  Mat S = lrc::gaussian_matrix<double>(3, 3, rng);
  S = (S + S.transpose()).eval();
  Mat dense = lrc::materialize(lrc::kron_sum_operator(S));
  CHECK((dense - oracle::kron_sum(S)).norm() <= 1e-13 * dense.norm());

  Mat asym = lrc::gaussian_matrix<double>(3, 3, rng);
  CHECK_THROWS_AS(lrc::kron_sum_apply(asym, Vec::Zero(9).eval()), std::invalid_argument);
}

TEST_CASE("update map: fixed points, zero step, full sampling with identity") {
  Index n = 3;
  auto inst = lrc::generate_instance<double>(n, 1, 9);

  Mask partial = Mask::from_pairs(n, {{0, 0}, {0, 1}});
  lrc::VecIndexMap map(n);
  Vec basis = Vec::Zero(n * n);
  basis(map.linear(2, 2)) = 1.0;  // unsampled position
  Vec image = lrc::update_apply(inst.M, partial, 0.7, basis);
  CHECK(image == basis);  // exact fixed point, no tolerance

  auto rng = lrc::make_rng(26, lrc::Stream::Sweep);
  Vec e = lrc::gaussian_vector<double>(n * n, rng);
  CHECK(lrc::update_apply(inst.M, partial, 0.0, e) == e);

  Vec half = lrc::update_apply(Mat::Identity(n, n).eval(), Mask::full(n), 0.25, e);
  CHECK((half - 0.5 * e).norm() <= 1e-15 * e.norm());

  CHECK_THROWS_AS(lrc::update_apply(inst.M, partial, -1.0, e), std::invalid_argument);
}

TEST_CASE("projected update annihilates the projector's kernel") {
  auto inst = lrc::generate_instance<double>(4, 2, 12);
  inst.mask = random_mask(4, 0.5, 12);
  auto rng = lrc::make_rng(27, lrc::Stream::Sweep);
  Mat Q = lrc::complement_projector(inst.U, 4);

  Mat Z = lrc::gaussian_matrix<double>(4, 4, rng);
  // kernel of the projector: skew part plus pure normal-space symmetric part
  Mat kernel_piece = (Z - Z.transpose()) + Q * (Z + Z.transpose()) * Q;
  Vec v = lrc::vec_matrix(kernel_piece.eval());
  Vec image = lrc::projected_update_apply(inst.U, inst.M, inst.mask, 0.3, v);
  CHECK(image.norm() <= 1e-12 * v.norm());
}

TEST_CASE("projected update materialization matches the dense triple product") {
  Index n = 3, r = 1;
  auto inst = lrc::generate_instance<double>(n, r, 31);
  inst.mask = random_mask(n, 0.5, 31);
  double eta = 0.4;

  Mat dense = lrc::materialize(lrc::projected_update_map(inst.U, inst.M, inst.mask, eta));

  Mat P = oracle::tangent_projector(inst.U, n) * oracle::symmetrizer(n);
  Mat A = oracle::update_matrix(inst.M, inst.mask.entries, eta);
  CHECK((dense - P * A * P).norm() <= 1e-12 * std::max(1.0, dense.norm()));
}

TEST_CASE("projected update spectrum for the rank-1 diagonal case") {
  // M = diag(1, 0), full sampling, eta = 0.5: eigenvalues {0, 0, 0, 0.5}.
  Mat X(2, 1);
  X << 1, 0;
  auto inst = lrc::assemble_instance<double>(2, 1, 0, 1.0, X, Mask::full(2));
  Mat H = lrc::materialize(lrc::projected_update_map(inst.U, inst.M, inst.mask, 0.5));

  Eigen::EigenSolver<Mat> eig(H);
  std::vector<double> mags;
  for (Index i = 0; i < 4; ++i) mags.push_back(std::abs(eig.eigenvalues()(i)));
  std::sort(mags.begin(), mags.end());
  CHECK(mags[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mags[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mags[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mags[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("materialize reproduces the transpose permutation and the identity") {
  Mat T = lrc::materialize(lrc::transpose_permutation<double>(2));
  CHECK(T == oracle::transpose_permutation(2));
  // the 4x4 permutation exchanging coordinates 1 and 2 (0-based)
  CHECK(T(0, 0) == 1.0);
  CHECK(T(1, 2) == 1.0);
  CHECK(T(2, 1) == 1.0);
  CHECK(T(3, 3) == 1.0);

  CHECK(lrc::materialize(lrc::identity_operator<double>(9)) == Mat::Identity(9, 9));
}

TEST_CASE("materialize respects the dense cap") {
  auto op = lrc::identity_operator<double>(100);
  CHECK_THROWS_AS(lrc::materialize(op, 99), lrc::DenseCapExceeded);
  CHECK_NOTHROW(lrc::materialize(op, 100));
}

TEST_CASE("matrix-free applies agree with dense materializations") {
  auto rng = lrc::make_rng(41, lrc::Stream::Sweep);
  for (Index n : {2, 3, 4, 6}) {
    for (Index r : {Index(1), Index(2)}) {
      if (r > n) continue;
      auto inst = lrc::generate_instance<double>(n, r, 100 + n * 10 + r);
      inst.mask = random_mask(n, 0.6, 100 + n);
      double eta = 0.3;

      std::vector<lrc::LinearOperator<double>> ops;
      ops.push_back(lrc::transpose_permutation<double>(n));
      ops.push_back(lrc::mask_operator(inst.mask));
      ops.push_back(lrc::tangent_projector(inst.U, n));
      ops.push_back(lrc::symmetrizer<double>(n));
      ops.push_back(lrc::feasible_projector(inst.U, n));
      ops.push_back(lrc::kron_sum_operator(inst.M));
      ops.push_back(lrc::update_map(inst.M, inst.mask, eta));
      ops.push_back(lrc::projected_update_map(inst.U, inst.M, inst.mask, eta));

      for (const auto& op : ops) {
        Mat dense = lrc::materialize(op);
        for (int trial = 0; trial < 20; ++trial) {
          Vec e = lrc::gaussian_vector<double>(n * n, rng);
          CHECK((dense * e - op(e)).norm() <= 1e-12 * std::max(1.0, e.norm()));
        }
      }
    }
  }
}

TEST_CASE("projector algebra: idempotent, self-adjoint, commuting") {
  auto rng = lrc::make_rng(42, lrc::Stream::Sweep);
  for (Index n : {2, 3, 4, 6}) {
    for (Index r : {Index(1), Index(2)}) {
      if (r > n) continue;
      Mat U = random_orthonormal(n, r, 55 + n + r);
      Mask mask = random_mask(n, 0.5, 55 + n);

      std::vector<lrc::LinearOperator<double>> projectors;
      projectors.push_back(lrc::tangent_projector(U, n));
      projectors.push_back(lrc::symmetrizer<double>(n));
      projectors.push_back(lrc::feasible_projector(U, n));
      projectors.push_back(lrc::mask_operator(mask));

      for (int trial = 0; trial < 30; ++trial) {
        Vec e = lrc::gaussian_vector<double>(n * n, rng);
        Vec u = lrc::gaussian_vector<double>(n * n, rng);
        for (const auto& op : projectors) {
          Vec once = op(e);
          CHECK((op(once) - once).norm() <= 1e-12 * e.norm());
          CHECK(std::abs(op(u).dot(e) - u.dot(op(e))) <= 1e-12 * u.norm() * e.norm());
        }
        Vec order_a = lrc::proj_tangent_apply(U, lrc::proj_sym_apply(e));
        Vec order_b = lrc::proj_sym_apply(lrc::proj_tangent_apply(U, e));
        CHECK((order_a - order_b).norm() <= 1e-12 * e.norm());
      }
    }
  }
}

TEST_CASE("operators apply linearly") {
  auto rng = lrc::make_rng(43, lrc::Stream::Sweep);
  Index n = 4;
  auto inst = lrc::generate_instance<double>(n, 2, 77);
  inst.mask = random_mask(n, 0.5, 77);
  auto op = lrc::projected_update_map(inst.U, inst.M, inst.mask, 0.25);
  for (int trial = 0; trial < 10; ++trial) {
    Vec u = lrc::gaussian_vector<double>(n * n, rng);
    Vec v = lrc::gaussian_vector<double>(n * n, rng);
    Vec lhs = op((2.0 * u - 3.0 * v).eval());
    Vec rhs = 2.0 * op(u) - 3.0 * op(v);
    CHECK((lhs - rhs).norm() <= 1e-12 * (u.norm() + v.norm()));
  }
}
