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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrc/gd.hpp"
#include "lrc/operators.hpp"
#include "lrc/problem.hpp"
#include "lrc/rate.hpp"
#include "lrc/truncation.hpp"
#include "lrc/types.hpp"

// Numerical verification of the second-order error terms behind the rate
// prediction: residual scaling sweeps with log-log slope fits, the exact
// fixed-point witness that keeps the unprojected propagator from
// contracting, and side-by-side traces of the true algorithm against its two
// linear models.

namespace lrc {

template <typename Scalar>
struct ScalingSweepResult {
  std::vector<Scalar> deltas;     // strictly decreasing perturbation scales
  std::vector<Scalar> residuals;  // geometric mean over directions, per delta
  Scalar fitted_slope = 0;        // OLS slope of log residual vs log delta
  Scalar target_slope = 2;
  bool applicable = true;
  std::string note;

  bool slope_in(Scalar lo, Scalar hi) const {
    return applicable && std::isfinite(fitted_slope) && fitted_slope >= lo && fitted_slope <= hi;
  }
};

/// OLS slope of y against x. NaN when fewer than two points.
template <typename Scalar>
Scalar fit_slope(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<Scalar>::quiet_NaN();
  Scalar n = static_cast<Scalar>(x.size());
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace detail {

template <typename Scalar>
void require_decreasing_positive(const std::vector<Scalar>& deltas) {
  if (deltas.size() < 2)
    throw std::invalid_argument("scaling sweep: need at least two perturbation scales");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > Scalar(0)))
      throw std::invalid_argument("scaling sweep: scales must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("scaling sweep: scales must be strictly decreasing");
  }
}

/// Fills the sweep result from per-delta geometric-mean residuals and fits
/// the slope. Residuals at the numerical floor make the fit meaningless, so
/// the slope is NaN in that case (the residual values are still reported).
template <typename Scalar>
ScalingSweepResult<Scalar> finish_sweep(const std::vector<Scalar>& deltas,
                                        const std::vector<Scalar>& residuals) {
  ScalingSweepResult<Scalar> out;
  out.deltas = deltas;
  out.residuals = residuals;
  std::vector<Scalar> lx, ly;
  bool floored = false;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (residuals[i] <= Scalar(1e-300)) {
      floored = true;
      continue;
    }
    lx.push_back(std::log(deltas[i]));
    ly.push_back(std::log(residuals[i]));
  }
  out.fitted_slope = floored && lx.size() < 2 ? std::numeric_limits<Scalar>::quiet_NaN()
                                              : fit_slope(lx, ly);
  return out;
}

/// Unit-Frobenius random directions, one per trial, shared by all deltas so
/// the sweep is paired.
template <typename Scalar>
std::vector<MatrixX<Scalar>> sweep_directions(Index rows, Index cols, int trials,
                                              std::uint64_t seed) {
  auto rng = make_rng(seed, Stream::Sweep);
  std::vector<MatrixX<Scalar>> dirs;
  dirs.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    MatrixX<Scalar> G = gaussian_matrix<Scalar>(rows, cols, rng);
    dirs.push_back(G / G.norm());
  }
  return dirs;
}

template <typename Scalar>
Scalar geometric_mean(const std::vector<Scalar>& values) {
  Scalar acc = 0;
  for (Scalar v : values) {
    if (v <= Scalar(0)) return Scalar(0);
    acc += std::log(v);
  }
  return std::exp(acc / static_cast<Scalar>(values.size()));
}

}  // namespace detail

/// One-step residual between the true error update and its linearization:
/// perturb the factor by delta along a unit direction, take one descent step,
/// and measure how far the new error lands from the linear prediction. The
/// residual must shrink quadratically in delta.
template <typename Scalar>
ScalingSweepResult<Scalar> check_recursion_residual(const ProblemInstance<Scalar>& instance,
                                                    Scalar eta, const std::vector<Scalar>& deltas,
                                                    int trials = 5) {
  detail::require_decreasing_positive(deltas);
  auto dirs = detail::sweep_directions<Scalar>(instance.n, instance.r, trials, instance.seed);

  std::vector<Scalar> residuals;
  for (Scalar delta : deltas) {
    std::vector<Scalar> per_trial;
    for (const auto& G : dirs) {
      MatrixX<Scalar> X = instance.Xstar + delta * G;
      MatrixX<Scalar> E0 = X * X.transpose() - instance.M;
      MatrixX<Scalar> X1 = gd_step(X, instance.mask, instance.M, eta);
      MatrixX<Scalar> E1 = X1 * X1.transpose() - instance.M;
      VectorX<Scalar> predicted = update_apply(instance.M, instance.mask, eta, vec_matrix(E0));
      per_trial.push_back((vec_matrix(E1) - predicted).norm());
    }
    residuals.push_back(detail::geometric_mean(per_trial));
  }
  return detail::finish_sweep(deltas, residuals);
}

/// Distance of a feasible error from its projection onto the symmetric
/// tangent directions; quadratic in the perturbation scale.
template <typename Scalar>
ScalingSweepResult<Scalar> check_projection_residual(const ProblemInstance<Scalar>& instance,
                                                     const std::vector<Scalar>& deltas,
                                                     int trials = 5) {
  detail::require_decreasing_positive(deltas);
  auto dirs = detail::sweep_directions<Scalar>(instance.n, instance.r, trials, instance.seed);

  std::vector<Scalar> residuals;
  for (Scalar delta : deltas) {
    std::vector<Scalar> per_trial;
    for (const auto& G : dirs) {
      MatrixX<Scalar> X = instance.Xstar + delta * G;
      VectorX<Scalar> e = vec_matrix((X * X.transpose() - instance.M).eval());
      per_trial.push_back((e - proj_feasible_apply(instance.U, e)).norm());
    }
    residuals.push_back(detail::geometric_mean(per_trial));
  }
  return detail::finish_sweep(deltas, residuals);
}

struct FixedPointWitness {
  bool applicable = false;  // false when every entry is observed
  bool exact = false;       // every unsampled basis vector is fixed, bitwise
  Index checked = 0;
  Index first_index = -1;   // linear index of the first witness
};

/// Any basis vector supported on an unobserved entry is an exact fixed point
/// of the unprojected propagator, which pins its spectral radius at 1 or
/// above for every partial sampling set. Checked bitwise at every unsampled
/// index.
template <typename Scalar>
FixedPointWitness check_unsampled_fixed_points(const ProblemInstance<Scalar>& instance,
                                               Scalar eta) {
  FixedPointWitness out;
  if (instance.mask.is_full()) return out;
  out.applicable = true;
  out.exact = true;

  Index dim = instance.n * instance.n;
  std::size_t cursor = 0;
  VectorX<Scalar> basis = VectorX<Scalar>::Zero(dim);
  for (Index k = 0; k < dim; ++k) {
    while (cursor < instance.mask.linear.size() && instance.mask.linear[cursor] < k) ++cursor;
    bool sampled = cursor < instance.mask.linear.size() && instance.mask.linear[cursor] == k;
    if (sampled) continue;
    if (out.first_index < 0) out.first_index = k;
    basis(k) = Scalar(1);
    VectorX<Scalar> image = update_apply(instance.M, instance.mask, eta, basis);
    basis(k) = Scalar(0);
    ++out.checked;
    for (Index i = 0; i < dim; ++i) {
      if (image(i) != (i == k ? Scalar(1) : Scalar(0))) {
        out.exact = false;
        return out;
      }
    }
  }
  return out;
}

template <typename Scalar>
struct TightSweepResult {
  ScalingSweepResult<Scalar> sweep;
  Scalar dominant_modulus = 0;
  Scalar dominant_imag_ratio = 0;      // |Im| / modulus of the dominant eigenvalue
  Scalar separation = 0;               // relative gap to the second-largest modulus
  Scalar max_direction_asymmetry = 0;  // asymmetry of the dominant direction, per unit delta
  Scalar max_offspace_leak = 0;        // normal-space component of the direction, per unit delta
  Scalar min_repaired_eigenvalue = 0;  // smallest eigenvalue of the repaired perturbation
  bool feasibility_ok = true;
};

/// Builds feasible errors next to the dominant eigendirection of the
/// projected propagator: scale the dominant eigenvector to norm delta, repair
/// positive semidefiniteness with a +(2/lambda_r) delta^2 shift, truncate back
/// to rank r, and measure the distance to the original direction. The
/// distance must shrink quadratically. Reports not-applicable when the
/// dominant eigenvalue is complex or not simple, since the construction
/// needs a single real eigendirection.
template <typename Scalar>
TightSweepResult<Scalar> check_tight_sweep(const ProblemInstance<Scalar>& instance, Scalar eta,
                                           const std::vector<Scalar>& deltas,
                                           Index dense_cap = kDefaultDenseCap) {
  detail::require_decreasing_positive(deltas);
  TightSweepResult<Scalar> out;
  out.sweep.deltas = deltas;

  MatrixX<Scalar> H = build_rate_matrix(instance, eta, dense_cap);
  Eigen::EigenSolver<MatrixX<Scalar>> eig(H, /*computeEigenvectors=*/true);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("check_tight_sweep: eigensolver failed");

  Index dom = 0;
  Scalar best = -1, second = -1;
  for (Index i = 0; i < H.rows(); ++i) {
    Scalar mag = std::abs(eig.eigenvalues()(i));
    if (mag > best) {
      second = best;
      best = mag;
      dom = i;
    } else if (mag > second) {
      second = mag;
    }
  }
  out.dominant_modulus = best;
  out.dominant_imag_ratio =
      best > Scalar(0) ? std::abs(eig.eigenvalues()(dom).imag()) / best : Scalar(0);
  out.separation = best > Scalar(0) ? (best - second) / best : Scalar(0);

  if (out.dominant_imag_ratio > Scalar(1e-8)) {
    out.sweep.applicable = false;
    out.sweep.note = "dominant eigenvalue is a complex pair";
    return out;
  }
  if (out.separation < Scalar(1e-8)) {
    out.sweep.applicable = false;
    out.sweep.note = "dominant eigenvalue is not simple";
    return out;
  }

  VectorX<Scalar> q = eig.eigenvectors().col(dom).real();
  q /= q.norm();
  MatrixX<Scalar> Q = complement_projector(instance.U, instance.n);
  Scalar lambda_r = instance.Lambda(instance.r - 1);
  Scalar feas_tol = Scalar(1e-9) * instance.M.norm();

  std::vector<Scalar> residuals;
  out.min_repaired_eigenvalue = std::numeric_limits<Scalar>::max();
  for (Scalar delta : deltas) {
    MatrixX<Scalar> G = unvec_matrix((delta * q).eval(), instance.n);
    out.max_direction_asymmetry =
        std::max(out.max_direction_asymmetry, (G - G.transpose()).norm() / delta);
    out.max_offspace_leak = std::max(out.max_offspace_leak, (Q * G * Q).norm() / delta);

    MatrixX<Scalar> F =
        G + (Scalar(2) / lambda_r) * delta * delta * MatrixX<Scalar>::Identity(instance.n, instance.n);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> psd(
        ((instance.M + F + (instance.M + F).transpose()) / Scalar(2)).eval(),
        Eigen::EigenvaluesOnly);
    out.min_repaired_eigenvalue = std::min(out.min_repaired_eigenvalue, psd.eigenvalues()(0));

    MatrixX<Scalar> E = truncated_eigendecomposition((instance.M + F).eval(), instance.r) - instance.M;
    if (!feasibility_check(E, instance, feas_tol).all_ok()) out.feasibility_ok = false;
    residuals.push_back((E - G).norm());
  }
  out.sweep = detail::finish_sweep(deltas, residuals);
  return out;
}

template <typename Scalar>
struct FirstOrderComparison {
  std::vector<Index> iters;
  std::vector<Scalar> err_fro;          // true algorithm
  std::vector<Scalar> model_plain;      // unprojected linear model, column pred_A
  std::vector<Scalar> model_projected;  // projected linear model, column pred_H
  std::vector<Scalar> bound;            // |e0| * rho^k
  Scalar rho = 0;
  bool diverged = false;

  std::size_t rows() const { return iters.size(); }
};

/// Runs the true algorithm and both linear models from the same initial
/// error, recording all four curves per iteration.
template <typename Scalar>
FirstOrderComparison<Scalar> compare_first_order_traces(const ProblemInstance<Scalar>& instance,
                                                        const MatrixX<Scalar>& X0, Scalar eta,
                                                        Index k_max,
                                                        Index dense_cap = kDefaultDenseCap,
                                                        Scalar stop_tol = Scalar(0)) {
  GdConfig<Scalar> config;
  config.eta = eta;
  config.max_iters = k_max;
  config.stop_tol = stop_tol;
  config.record_every = 1;
  ConvergenceTrace<Scalar> trace = run_gd(instance, X0, config);

  FirstOrderComparison<Scalar> out;
  out.iters = trace.iters;
  out.err_fro = trace.err_fro;
  out.diverged = trace.diverged;
  out.rho = contraction_check(instance, eta, dense_cap).rho_H;

  auto plain = update_map(instance.M, instance.mask, eta);
  auto projected = projected_update_map(instance.U, instance.M, instance.mask, eta);
  VectorX<Scalar> e0 = vec_matrix((X0 * X0.transpose() - instance.M).eval());
  Scalar e0_norm = e0.norm();

  VectorX<Scalar> a = e0, h = e0;
  Index k = 0;
  for (std::size_t t = 0; t < out.rows(); ++t) {
    for (; k < out.iters[t]; ++k) {
      a = plain(a);
      h = projected(h);
    }
    out.model_plain.push_back(a.norm());
    out.model_projected.push_back(h.norm());
    out.bound.push_back(e0_norm * std::pow(out.rho, Scalar(out.iters[t])));
  }
  return out;
}

/// Largest amplification the projected propagator attains over random
/// feasible errors of norm at most `norm_cap`. This samples the constrained
/// amplification from below; it must stay under the spectral radius (up to
/// second-order slack).
template <typename Scalar>
Scalar feasible_amplification_sup(const ProblemInstance<Scalar>& instance, Scalar eta,
                                  int samples, Scalar norm_cap, std::uint64_t seed = 0) {
  auto projected = projected_update_map(instance.U, instance.M, instance.mask, eta);
  Scalar x_norm = std::sqrt(instance.Lambda(0));
  auto rng = make_rng(seed == 0 ? instance.seed : seed, Stream::Sweep, /*attempt=*/1);

  Scalar sup = 0;
  for (int s = 0; s < samples; ++s) {
    MatrixX<Scalar> G = gaussian_matrix<Scalar>(instance.n, instance.r, rng);
    G /= G.norm();
    Scalar tau = norm_cap / (Scalar(4) * x_norm);
    for (int pass = 0; pass < 2; ++pass) {
      MatrixX<Scalar> X = instance.Xstar + tau * G;
      VectorX<Scalar> e = vec_matrix((X * X.transpose() - instance.M).eval());
      Scalar norm = e.norm();
      if (norm > norm_cap) {
        tau *= Scalar(0.9) * norm_cap / norm;
        continue;
      }
      if (norm > Scalar(0)) sup = std::max(sup, projected(e).norm() / norm);
      break;
    }
  }
  return sup;
}

}  // namespace lrc
