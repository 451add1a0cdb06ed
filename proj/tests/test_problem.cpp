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

#include <cmath>

#include "lrc/problem.hpp"
#include "lrc/rng.hpp"

using lrc::Index;
using Mat = lrc::MatrixX<double>;
using Vec = lrc::VectorX<double>;
using Mask = lrc::SamplingMask<double>;

TEST_CASE("generated instances have the advertised rank and are PSD") {
  auto inst = lrc::generate_instance<double>(20, 3, 42);
  CHECK(inst.M.rows() == 20);
  CHECK(inst.M.cols() == 20);

  Eigen::SelfAdjointEigenSolver<Mat> eig(inst.M);
  int above = 0;
  for (Index i = 0; i < 20; ++i) {
    CHECK(eig.eigenvalues()(i) >= -1e-10 * inst.M.norm());
    if (eig.eigenvalues()(i) > 1e-10 * inst.M.norm()) ++above;
  }
  CHECK(above == 3);
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("full-rank instance leaves no normal space") {
  auto inst = lrc::generate_instance<double>(5, 5, 7);
  Mat Q = lrc::complement_projector(inst.U, 5);
  CHECK(Q.norm() <= 1e-10);
}

TEST_CASE("generation is deterministic in the seed") {
  auto a = lrc::generate_instance<double>(12, 2, 99);
  auto b = lrc::generate_instance<double>(12, 2, 99);
  CHECK(a.Xstar == b.Xstar);
  CHECK(a.M == b.M);
  CHECK(a.U == b.U);
  CHECK(a.Lambda == b.Lambda);

  auto c = lrc::generate_instance<double>(12, 2, 100);
  CHECK(a.Xstar != c.Xstar);
}

TEST_CASE("generate rejects bad ranks, assemble rejects degenerate factors") {
  CHECK_THROWS_AS(lrc::generate_instance<double>(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(lrc::generate_instance<double>(4, 5, 1), std::invalid_argument);

  Mat degenerate(4, 2);
  degenerate.col(0) << 1, 2, 3, 4;
  degenerate.col(1) = 2.0 * degenerate.col(0);
  CHECK_THROWS_AS(lrc::assemble_instance<double>(4, 2, 0, 1.0, degenerate, Mask{}),
                  std::invalid_argument);
}

TEST_CASE("bernoulli sampling is symmetric and hits the expected cardinality") {
  CHECK(lrc::sample_bernoulli_symmetric<double>(6, 1.0, 3).cardinality() == 36);

  for (std::uint64_t seed : {10u, 11u, 12u}) {
    Mask mask = lrc::sample_bernoulli_symmetric<double>(8, 0.4, seed);
    for (const auto& [i, j] : mask.entries) CHECK(mask.contains(j, i));
  }

  // s counts both orientations, so E[s] = p * n^2 and
  // Var[s] = p(1-p) * (4 * n(n-1)/2 + n).
  Index n = 20;
  double p = 0.3;
  int seeds = 1000;
  double sum = 0;
  for (int seed = 0; seed < seeds; ++seed)
    sum += static_cast<double>(
        lrc::sample_bernoulli_symmetric<double>(n, p, static_cast<std::uint64_t>(seed))
            .cardinality());
  double mean = sum / seeds;
  double expected = p * static_cast<double>(n * n);
  double variance = p * (1 - p) * (4.0 * n * (n - 1) / 2.0 + n);
  double standard_error = std::sqrt(variance / seeds);
  CHECK(std::abs(mean - expected) <= 3.0 * standard_error);
}

TEST_CASE("bernoulli sampling rejects invalid probabilities") {
  CHECK_THROWS_AS(lrc::sample_bernoulli_symmetric<double>(4, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(lrc::sample_bernoulli_symmetric<double>(4, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(lrc::sample_bernoulli_symmetric<double>(4, -0.1, 1), std::invalid_argument);
}

TEST_CASE("perturbed initialization: exactness at sigma 0, first-order scaling, determinism") {
  auto inst = lrc::generate_instance<double>(20, 3, 5);
  CHECK(lrc::init_perturbed(inst.Xstar, 0.0, 5) == inst.Xstar);
  CHECK(lrc::init_perturbed(inst.Xstar, 1e-2, 5) == lrc::init_perturbed(inst.Xstar, 1e-2, 5));

  // same seed, same noise direction: halving sigma halves the error norm to
  // first order
  double e1 = (lrc::init_perturbed(inst.Xstar, 1e-2, 5) *
                   lrc::init_perturbed(inst.Xstar, 1e-2, 5).transpose() -
               inst.M)
                  .norm();
  double e2 = (lrc::init_perturbed(inst.Xstar, 5e-3, 5) *
                   lrc::init_perturbed(inst.Xstar, 5e-3, 5).transpose() -
               inst.M)
                  .norm();
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e1 > 0.0);
  CHECK_THROWS_AS(lrc::init_perturbed(inst.Xstar, -1.0, 5), std::invalid_argument);
}

TEST_CASE("spectral initialization recovers the truth under full sampling") {
  auto inst = lrc::generate_instance<double>(10, 3, 8);
  inst.mask = Mask::full(10);
  auto init = lrc::init_spectral(inst.M, inst.mask, 1.0, 3);
  CHECK_FALSE(init.deficient);
  CHECK((init.X0 * init.X0.transpose() - inst.M).norm() <= 1e-10 * inst.M.norm());
}

TEST_CASE("spectral initialization flags an empty observation set") {
  auto inst = lrc::generate_instance<double>(6, 2, 9);
  inst.mask = Mask::empty(6);
  auto init = lrc::init_spectral(inst.mask.filter(inst.M), inst.mask, 0.3, 2);
  CHECK(init.deficient);
  CHECK(init.X0.isZero(0.0));
}

TEST_CASE("spectral initialization usually improves on the zero guess") {
  int improved = 0;
  int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    auto inst = lrc::generate_instance<double>(20, 3, 1000 + seed);
    inst.mask = lrc::sample_bernoulli_symmetric<double>(20, 0.3, 1000 + seed);
    auto init = lrc::init_spectral(inst.mask.filter(inst.M), inst.mask, 0.3, 3);
    if ((init.X0 * init.X0.transpose() - inst.M).norm() < inst.M.norm()) ++improved;
  }
  CHECK(improved >= 95);
}

TEST_CASE("feasibility report distinguishes the three failure modes") {
  auto inst = lrc::generate_instance<double>(8, 2, 13);
  double tol = 1e-10 * inst.M.norm();
  auto rng = lrc::make_rng(13, lrc::Stream::Sweep);

  for (int trial = 0; trial < 100; ++trial) {
    Mat X = lrc::gaussian_matrix<double>(8, 2, rng);
    auto report = lrc::feasibility_check((X * X.transpose() - inst.M).eval(), inst, tol);
    CHECK(report.all_ok());
  }

  auto negative = lrc::feasibility_check((-2.0 * inst.M).eval(), inst, tol);
  CHECK_FALSE(negative.psd_ok);

  Mat Z = lrc::gaussian_matrix<double>(8, 8, rng);
  auto skew = lrc::feasibility_check((Z - Z.transpose()).eval(), inst, tol);
  CHECK_FALSE(skew.symmetric_ok);

  // full-rank symmetric PSD perturbation violates only the rank condition
  Mat bump = Mat::Identity(8, 8);
  auto rank = lrc::feasibility_check(bump, inst, tol);
  CHECK_FALSE(rank.rank_ok);
  CHECK(rank.symmetric_ok);
  CHECK(rank.psd_ok);
}
