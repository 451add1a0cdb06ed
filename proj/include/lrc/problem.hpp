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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lrc/rng.hpp"
#include "lrc/sampling_mask.hpp"
#include "lrc/truncation.hpp"
#include "lrc/types.hpp"

namespace lrc {

/// Symmetric rank-r completion instance: ground truth M = Xstar Xstar^T, its
/// economy eigendecomposition M = U diag(Lambda) U^T with Lambda sorted
/// non-increasing, and the symmetric set of observed entries. Immutable after
/// construction and safe to share across threads.
template <typename Scalar>
struct ProblemInstance {
  Index n = 0;
  Index r = 0;
  std::uint64_t seed = 0;
  double p = 1.0;  // sampling probability recorded for the mask
  std::string generator_name = kGeneratorName;

  MatrixX<Scalar> Xstar;  // n x r
  MatrixX<Scalar> M;      // n x n PSD
  MatrixX<Scalar> U;      // n x r orthonormal
  VectorX<Scalar> Lambda; // r positive eigenvalues, non-increasing
  SamplingMask<Scalar> mask;

  Scalar spectral_norm() const { return Lambda(0); }

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

template <typename Scalar>
void ProblemInstance<Scalar>::validate() const {
  if (n <= 0 || r <= 0 || r > n)
    throw std::invalid_argument("ProblemInstance: require 1 <= r <= n");
  if (Xstar.rows() != n || Xstar.cols() != r || M.rows() != n || M.cols() != n ||
      U.rows() != n || U.cols() != r || Lambda.size() != r)
    throw std::invalid_argument("ProblemInstance: shape mismatch");
  Scalar m_norm = M.norm();
  if ((M - Xstar * Xstar.transpose()).norm() > Scalar(1e-10) * m_norm)
    throw std::invalid_argument("ProblemInstance: M does not match Xstar Xstar^T");
  if ((M - U * Lambda.asDiagonal() * U.transpose()).norm() > Scalar(1e-10) * m_norm)
    throw std::invalid_argument("ProblemInstance: M does not match U diag(Lambda) U^T");
  if ((U.transpose() * U - MatrixX<Scalar>::Identity(r, r)).norm() > Scalar(1e-12) * Scalar(r))
    throw std::invalid_argument("ProblemInstance: U is not orthonormal");
  for (Index k = 0; k + 1 < r; ++k)
    if (Lambda(k) < Lambda(k + 1))
      throw std::invalid_argument("ProblemInstance: eigenvalues not sorted non-increasing");
  if (Lambda(r - 1) <= Scalar(0))
    throw std::invalid_argument("ProblemInstance: smallest eigenvalue not positive");
  if (mask.n != 0) {
    if (mask.n != n) throw std::invalid_argument("ProblemInstance: mask dimension mismatch");
    for (const auto& [i, j] : mask.entries)
      if (!mask.contains(j, i))
        throw std::invalid_argument("ProblemInstance: mask is not symmetric");
  }
}

inline constexpr double kRankDeficiencyRatio = 1e-8;

/// Assembles the derived fields (M, U, Lambda) from a given factor and
/// validates the result. The economy eigendecomposition comes from the thin
/// SVD of the factor, which yields exactly r positive eigenvalues and an
/// orthonormal U without an n x n eigensolve.
template <typename Scalar>
ProblemInstance<Scalar> assemble_instance(Index n, Index r, std::uint64_t seed, double p,
                                          MatrixX<Scalar> Xstar, SamplingMask<Scalar> mask) {
  if (n <= 0 || r <= 0 || r > n)
    throw std::invalid_argument("assemble_instance: require 1 <= r <= n");
  if (Xstar.rows() != n || Xstar.cols() != r)
    throw std::invalid_argument("assemble_instance: factor shape mismatch");

  ProblemInstance<Scalar> inst;
  inst.n = n;
  inst.r = r;
  inst.seed = seed;
  inst.p = p;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(Xstar, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX<Scalar>& sv = svd.singularValues();
  if (sv(r - 1) < Scalar(kRankDeficiencyRatio) * sv(0))
    throw std::invalid_argument("assemble_instance: factor is numerically rank deficient");
  inst.U = svd.matrixU();
  inst.Lambda = sv.array().square();
  inst.Xstar = std::move(Xstar);
  inst.M = inst.Xstar * inst.Xstar.transpose();
  inst.mask = std::move(mask);
  inst.validate();
  return inst;
}

/// Draws Xstar with i.i.d. standard normal entries and assembles the ground
/// truth. A draw whose smallest singular value falls below 1e-8 times the
/// largest is redrawn from the next attempt substream. The mask is left
/// empty; sampling is a separate step.
template <typename Scalar>
ProblemInstance<Scalar> generate_instance(Index n, Index r, std::uint64_t seed) {
  if (n <= 0 || r <= 0 || r > n)
    throw std::invalid_argument("generate_instance: require 1 <= r <= n");

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto rng = make_rng(seed, Stream::Factor, static_cast<std::uint64_t>(attempt));
    MatrixX<Scalar> X = gaussian_matrix<Scalar>(n, r, rng);
    Eigen::JacobiSVD<MatrixX<Scalar>> probe(X);
    const VectorX<Scalar>& sv = probe.singularValues();
    if (sv(r - 1) < Scalar(kRankDeficiencyRatio) * sv(0)) continue;  // degenerate draw
    return assemble_instance<Scalar>(n, r, seed, 1.0, std::move(X), SamplingMask<Scalar>{});
  }
  throw std::runtime_error("generate_instance: exhausted redraw attempts");
}

/// Includes each unordered pair {i,j} with i <= j (diagonal included)
/// independently with probability p, then mirrors, so the observed set is
/// symmetric by construction.
template <typename Scalar>
SamplingMask<Scalar> sample_bernoulli_symmetric(Index n, double p, std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("sample_bernoulli_symmetric: require 0 < p <= 1");
  auto rng = make_rng(seed, Stream::Mask);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j)
      if (unif(rng) < p) pairs.emplace_back(i, j);
  return SamplingMask<Scalar>::from_pairs(n, pairs);
}

/// Ground-truth factor plus i.i.d. normal noise of standard deviation sigma.
template <typename Scalar>
MatrixX<Scalar> init_perturbed(const MatrixX<Scalar>& Xstar, Scalar sigma, std::uint64_t seed) {
  if (sigma < Scalar(0)) throw std::invalid_argument("init_perturbed: sigma must be nonnegative");
  if (sigma == Scalar(0)) return Xstar;
  auto rng = make_rng(seed, Stream::Noise);
  return Xstar + sigma * gaussian_matrix<Scalar>(Xstar.rows(), Xstar.cols(), rng);
}

template <typename Scalar>
struct SpectralInit {
  MatrixX<Scalar> X0;
  bool deficient = false;  // fewer than r positive eigenvalues; missing columns are zero
};

/// Spectral initialization: top-r eigenpairs of the rescaled observed matrix
/// (1/p) * masked M, with negative eigenvalues clipped to zero.
template <typename Scalar>
SpectralInit<Scalar> init_spectral(const MatrixX<Scalar>& maskedM, const SamplingMask<Scalar>& mask,
                                   double p, Index r) {
  if (!(p > 0.0)) throw std::invalid_argument("init_spectral: require p > 0");
  if (maskedM.rows() != mask.n || maskedM.cols() != mask.n)
    throw std::invalid_argument("init_spectral: shape mismatch");
  Index n = mask.n;
  if (r <= 0 || r > n) throw std::invalid_argument("init_spectral: require 1 <= r <= n");

  MatrixX<Scalar> B = mask.filter(maskedM) / Scalar(p);
  B = (B + B.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(B);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("init_spectral: eigensolver failed");

  SpectralInit<Scalar> out;
  out.X0 = MatrixX<Scalar>::Zero(n, r);
  for (Index k = 0; k < r; ++k) {
    Index idx = n - 1 - k;  // eigenvalues ascending; walk from the top
    Scalar mu = eig.eigenvalues()(idx);
    if (mu > Scalar(0)) {
      out.X0.col(k) = eig.eigenvectors().col(idx) * std::sqrt(mu);
    } else {
      out.deficient = true;  // clipped to zero
    }
  }
  return out;
}

/// Report of the three feasibility conditions an error matrix E = X X^T - M
/// satisfies: (rank) M+E is its own best rank-r approximation, (symmetry)
/// E = E^T, (psd) M+E has no eigenvalue below -tol.
template <typename Scalar>
struct FeasibilityReport {
  bool rank_ok = false;
  bool symmetric_ok = false;
  bool psd_ok = false;
  Scalar rank_residual = 0;
  Scalar asymmetry = 0;
  Scalar min_eigenvalue = 0;
  Scalar tol = 0;
  bool all_ok() const { return rank_ok && symmetric_ok && psd_ok; }
};

template <typename Scalar>
FeasibilityReport<Scalar> feasibility_check(const MatrixX<Scalar>& E,
                                            const ProblemInstance<Scalar>& instance, Scalar tol) {
  if (E.rows() != instance.n || E.cols() != instance.n)
    throw std::invalid_argument("feasibility_check: shape mismatch");
  FeasibilityReport<Scalar> report;
  report.tol = tol;

  MatrixX<Scalar> sum = instance.M + E;
  MatrixX<Scalar> sym = (sum + sum.transpose()) / Scalar(2);

  report.asymmetry = (E - E.transpose()).norm();
  report.symmetric_ok = report.asymmetry <= tol;

  report.rank_residual = (truncated_eigendecomposition(sym, instance.r) - sym).norm();
  report.rank_ok = report.rank_residual <= tol;

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(sym, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues()(0);
  report.psd_ok = report.min_eigenvalue >= -tol;
  return report;
}

}  // namespace lrc
