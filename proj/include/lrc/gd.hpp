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
#include <utility>
#include <vector>

#include "lrc/problem.hpp"
#include "lrc/types.hpp"

namespace lrc {

/// Step size given either as an absolute value or as c divided by the
/// spectral norm of the ground truth.
template <typename Scalar>
struct StepSizeRule {
  enum class Kind { Absolute, OverSpectralNorm };
  Kind kind = Kind::OverSpectralNorm;
  Scalar value = Scalar(0.5);

  static StepSizeRule absolute(Scalar eta) { return {Kind::Absolute, eta}; }
  static StepSizeRule over_spectral_norm(Scalar c) { return {Kind::OverSpectralNorm, c}; }

  Scalar resolve(Scalar spectral_norm) const {
    if (kind == Kind::Absolute) return value;
    if (spectral_norm <= Scalar(0))
      throw std::invalid_argument("StepSizeRule: spectral norm must be positive");
    return value / spectral_norm;
  }
};

template <typename Scalar>
struct GdConfig {
  Scalar eta = Scalar(0);      // resolved absolute step size
  Index max_iters = 2000;
  Scalar stop_tol = Scalar(0); // threshold on the error norm against the full M
  Index record_every = 1;

  void validate() const {
    if (!(eta >= Scalar(0))) throw std::invalid_argument("GdConfig: eta must be nonnegative");
    if (max_iters < 1) throw std::invalid_argument("GdConfig: max_iters must be at least 1");
    if (stop_tol < Scalar(0)) throw std::invalid_argument("GdConfig: stop_tol must be nonnegative");
    if (record_every < 1) throw std::invalid_argument("GdConfig: record_every must be at least 1");
  }
};

/// Per-iteration diagnostics. err_fro is measured against the full ground
/// truth, which the algorithm itself never touches; it is an oracle-only
/// measurement available because instances are synthetic.
template <typename Scalar>
struct ConvergenceTrace {
  std::vector<Index> iters;
  std::vector<Scalar> err_fro;
  std::vector<Scalar> grad_fro;
  std::vector<Scalar> obj;
  bool diverged = false;
  MatrixX<Scalar> final_x;

  std::size_t rows() const { return iters.size(); }
};

/// f(X) = 1/4 * || observed part of (X X^T - M) ||_F^2
template <typename Scalar>
Scalar objective(const MatrixX<Scalar>& X, const SamplingMask<Scalar>& mask,
                 const MatrixX<Scalar>& M) {
  MatrixX<Scalar> R = mask.filter(X * X.transpose() - M);
  return R.squaredNorm() / Scalar(4);
}

template <typename Scalar>
MatrixX<Scalar> gradient(const MatrixX<Scalar>& X, const SamplingMask<Scalar>& mask,
                         const MatrixX<Scalar>& M) {
  MatrixX<Scalar> R = mask.filter(X * X.transpose() - M);
  return R * X;
}

template <typename Scalar>
MatrixX<Scalar> gd_step(const MatrixX<Scalar>& X, const SamplingMask<Scalar>& mask,
                        const MatrixX<Scalar>& M, Scalar eta) {
  if (eta < Scalar(0)) throw std::invalid_argument("gd_step: eta must be nonnegative");
  return X - eta * gradient(X, mask, M);
}

inline constexpr double kDivergenceFactor = 1e6;

/// Runs the plain factorized descent from X0, recording every record_every-th
/// iterate plus the final one. Stops when the error norm drops to stop_tol,
/// max_iters is reached, or the error exceeds 1e6 times the norm of M
/// (flagged as diverged).
template <typename Scalar>
ConvergenceTrace<Scalar> run_gd(const ProblemInstance<Scalar>& instance, const MatrixX<Scalar>& X0,
                                const GdConfig<Scalar>& config) {
  config.validate();
  if (X0.rows() != instance.n || X0.cols() != instance.r)
    throw std::invalid_argument("run_gd: X0 shape mismatch");

  ConvergenceTrace<Scalar> trace;
  Scalar m_norm = instance.M.norm();
  Scalar divergence_bound = Scalar(kDivergenceFactor) * m_norm;
  MatrixX<Scalar> X = X0;

  auto record = [&](Index k, const MatrixX<Scalar>& R, Scalar err) {
    trace.iters.push_back(k);
    trace.err_fro.push_back(err);
    trace.grad_fro.push_back((R * X).norm());
    trace.obj.push_back(R.squaredNorm() / Scalar(4));
  };

  for (Index k = 0;; ++k) {
    MatrixX<Scalar> E = X * X.transpose() - instance.M;
    MatrixX<Scalar> R = instance.mask.filter(E);
    Scalar err = E.norm();
    bool done = err <= config.stop_tol || k >= config.max_iters || !std::isfinite(err) ||
                err > divergence_bound;
    if (k % config.record_every == 0 || done) record(k, R, err);
    if (done) {
      trace.diverged = !std::isfinite(err) || err > divergence_bound;
      break;
    }
    X -= config.eta * (R * X);
  }
  trace.final_x = std::move(X);
  return trace;
}

}  // namespace lrc
