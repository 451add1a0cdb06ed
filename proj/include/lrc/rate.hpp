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
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lrc/gd.hpp"
#include "lrc/operators.hpp"
#include "lrc/problem.hpp"
#include "lrc/types.hpp"

namespace lrc {

enum class RadiusMethod { DenseEigensolve, GelfandIteration };

inline const char* to_string(RadiusMethod method) {
  return method == RadiusMethod::DenseEigensolve ? "dense-eigensolve" : "gelfand-iteration";
}

/// Dense matrix of the projected one-step error propagator H. Real and in
/// general nonsymmetric.
template <typename Scalar>
MatrixX<Scalar> build_rate_matrix(const ProblemInstance<Scalar>& instance, Scalar eta,
                                  Index dense_cap = kDefaultDenseCap) {
  return materialize(projected_update_map(instance.U, instance.M, instance.mask, eta), dense_cap);
}

template <typename Scalar>
struct SpectralRadius {
  Scalar rho = 0;
  std::complex<Scalar> dominant{0, 0};
};

/// Largest eigenvalue magnitude of a general real square matrix, from the
/// complete spectrum (real Schur reduction with shifted QR).
template <typename Scalar>
SpectralRadius<Scalar> spectral_radius_dense(const MatrixX<Scalar>& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("spectral_radius_dense: matrix not square");
  Eigen::EigenSolver<MatrixX<Scalar>> eig(A, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error(
        "spectral_radius_dense: QR iteration did not converge within Eigen's "
        "internal iteration limit (40n); the matrix may be badly scaled");
  SpectralRadius<Scalar> out;
  for (Index i = 0; i < A.rows(); ++i) {
    std::complex<Scalar> lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) > out.rho) {
      out.rho = std::abs(lambda);
      out.dominant = lambda;
    }
  }
  return out;
}

template <typename Scalar>
struct GelfandEstimate {
  Scalar rho = 0;
  Scalar spread = 0;           // half-range of the per-probe estimates
  bool decayed_to_zero = false;  // every probe collapsed below the floor
  int probes_used = 0;
};

/// Matrix-free spectral-radius estimate. Each probe runs a renormalized power
/// iteration and fits the two-step recurrence w_{k+1} = alpha w_k + beta
/// w_{k-1} to the last three iterates; the dominant root of
/// z^2 - alpha z - beta recovers the radius even when the dominant
/// eigenvalues form a complex-conjugate pair. The reported estimate is the
/// median across probes.
template <typename Scalar>
GelfandEstimate<Scalar> spectral_radius_gelfand(const LinearOperator<Scalar>& op,
                                                Index k_max = 400, int probes = 8,
                                                std::uint64_t seed = 0) {
  if (k_max < 10) throw std::invalid_argument("spectral_radius_gelfand: k_max must be at least 10");
  if (probes < 1) throw std::invalid_argument("spectral_radius_gelfand: need at least one probe");

  constexpr Scalar kFloor = Scalar(1e-300);
  std::vector<Scalar> estimates;

  for (int probe = 0; probe < probes; ++probe) {
    auto rng = make_rng(seed, Stream::Probe, static_cast<std::uint64_t>(probe));
    VectorX<Scalar> u_prev = gaussian_vector<Scalar>(op.dim, rng);
    Scalar norm0 = u_prev.norm();
    if (norm0 <= kFloor) continue;
    u_prev /= norm0;

    VectorX<Scalar> w = op(u_prev);
    Scalar g_curr = w.norm();
    if (g_curr <= kFloor) continue;  // probe annihilated in one step
    VectorX<Scalar> u_curr = w / g_curr;

    Scalar rho_est = g_curr;
    Scalar rho_last = -1;
    int stable = 0;
    bool decayed = false;

    for (Index k = 1; k < k_max; ++k) {
      w = op(u_curr);
      Scalar g_new = w.norm();
      if (g_new <= kFloor) {
        decayed = true;
        break;
      }
      VectorX<Scalar> u_next = w / g_new;

      // Least squares for u_next = a*u_curr + b*u_prev; both regressors are
      // unit vectors, so the Gram matrix is [[1, c],[c, 1]].
      Scalar c = u_curr.dot(u_prev);
      Scalar r1 = u_curr.dot(u_next);
      Scalar r2 = u_prev.dot(u_next);
      Scalar det = Scalar(1) - c * c;
      if (det > Scalar(1e-10)) {
        Scalar a = (r1 - c * r2) / det;
        Scalar b = (r2 - c * r1) / det;
        Scalar alpha = a * g_new;
        Scalar beta = b * g_new * g_curr;
        Scalar disc = alpha * alpha + Scalar(4) * beta;
        if (disc >= Scalar(0)) {
          Scalar root = std::sqrt(disc);
          rho_est = std::max(std::abs((alpha + root) / 2), std::abs((alpha - root) / 2));
        } else {
          rho_est = std::sqrt(-beta);  // conjugate pair: |z|^2 = -beta
        }
      } else {
        rho_est = g_new;  // iterate converged to a single direction
      }

      if (std::abs(rho_est - rho_last) <= Scalar(1e-13) * std::max(rho_est, Scalar(1e-30))) {
        if (++stable >= 3) break;
      } else {
        stable = 0;
      }
      rho_last = rho_est;
      u_prev = std::move(u_curr);
      u_curr = std::move(u_next);
      g_curr = g_new;
    }

    if (!decayed) estimates.push_back(rho_est);
  }

  GelfandEstimate<Scalar> out;
  out.probes_used = static_cast<int>(estimates.size());
  if (estimates.empty()) {
    out.decayed_to_zero = true;
    return out;
  }
  std::sort(estimates.begin(), estimates.end());
  std::size_t mid = estimates.size() / 2;
  out.rho = estimates.size() % 2 == 1 ? estimates[mid]
                                      : (estimates[mid - 1] + estimates[mid]) / Scalar(2);
  out.spread = (estimates.back() - estimates.front()) / Scalar(2);
  return out;
}

template <typename Scalar>
struct RateReport {
  Scalar rho_H = 0;  // radius of the projected propagator: the predicted rate
  Scalar rho_A = 0;  // radius of the unprojected propagator
  bool contracts = false;
  Scalar eta = 0;
  RadiusMethod method = RadiusMethod::DenseEigensolve;
  std::optional<std::complex<Scalar>> dominant;  // dominant eigenvalue of the projected propagator
};

/// Computes both spectral radii and the contraction verdict. Uses the dense
/// eigensolver whenever n^2 fits the cap, otherwise the Gelfand iteration.
template <typename Scalar>
RateReport<Scalar> contraction_check(const ProblemInstance<Scalar>& instance, Scalar eta,
                                     Index dense_cap = kDefaultDenseCap) {
  RateReport<Scalar> report;
  report.eta = eta;
  auto projected = projected_update_map(instance.U, instance.M, instance.mask, eta);
  auto plain = update_map(instance.M, instance.mask, eta);
  if (instance.n * instance.n <= dense_cap) {
    SpectralRadius<Scalar> sr = spectral_radius_dense(materialize(projected, dense_cap));
    report.rho_H = sr.rho;
    report.dominant = sr.dominant;
    report.rho_A = spectral_radius_dense(materialize(plain, dense_cap)).rho;
    report.method = RadiusMethod::DenseEigensolve;
  } else {
    report.rho_H = spectral_radius_gelfand(projected).rho;
    report.rho_A = spectral_radius_gelfand(plain).rho;
    report.method = RadiusMethod::GelfandIteration;
  }
  report.contracts = report.rho_H < Scalar(1);
  return report;
}

/// C * e0 * rho^k for each k in k_list.
template <typename Scalar>
std::vector<Scalar> theoretical_curve(Scalar e0_norm, Scalar rho, Scalar C,
                                      const std::vector<Index>& k_list) {
  if (rho < Scalar(0)) throw std::invalid_argument("theoretical_curve: rho must be nonnegative");
  std::vector<Scalar> out;
  out.reserve(k_list.size());
  for (Index k : k_list) out.push_back(C * e0_norm * std::pow(rho, Scalar(k)));
  return out;
}

/// Linear bound for the scalar recursion a_{n+1} <= rho*a_n + q*a_n^2:
/// a_n <= a0 * K * rho^n with K = (1 - a0*q/(rho*(1-rho)))^{-1}, defined when
/// a0 < rho*(1-rho)/q. Convergence to zero holds iff a0 < (1-rho)/q.
template <typename Scalar>
struct ScalarRecursionBound {
  Scalar rho = 0;
  Scalar q = 0;
  Scalar a0 = 0;
  Scalar K = 1;
  bool bound_defined = false;
  bool converges = false;
};

template <typename Scalar>
ScalarRecursionBound<Scalar> scalar_bound(Scalar rho, Scalar q, Scalar a0) {
  if (!(rho >= Scalar(0) && rho < Scalar(1)))
    throw std::invalid_argument("scalar_bound: require 0 <= rho < 1");
  if (q < Scalar(0)) throw std::invalid_argument("scalar_bound: require q >= 0");
  if (a0 < Scalar(0)) throw std::invalid_argument("scalar_bound: require a0 >= 0");

  ScalarRecursionBound<Scalar> out;
  out.rho = rho;
  out.q = q;
  out.a0 = a0;
  if (q == Scalar(0)) {
    out.bound_defined = true;
    out.converges = true;
    out.K = Scalar(1);
    return out;
  }
  out.converges = a0 < (Scalar(1) - rho) / q;
  out.bound_defined = rho > Scalar(0) && a0 < rho * (Scalar(1) - rho) / q;
  out.K = out.bound_defined ? Scalar(1) / (Scalar(1) - a0 * q / (rho * (Scalar(1) - rho)))
                            : std::numeric_limits<Scalar>::quiet_NaN();
  return out;
}

template <typename Scalar>
struct AsymptoticRateEstimate {
  Scalar rho = 0;
  Index points = 0;  // number of consecutive ratios entering the geometric mean
  bool valid = false;
};

/// Geometric mean of successive error ratios over the tail of the trace,
/// restricted to the band err in [lo, hi] * m_norm so the transient and the
/// numerical floor are excluded. Uses at most `window` ratios from the last
/// contiguous in-band run.
template <typename Scalar>
AsymptoticRateEstimate<Scalar> estimate_asymptotic_rate(const ConvergenceTrace<Scalar>& trace,
                                                        Scalar m_norm, Scalar lo = Scalar(1e-11),
                                                        Scalar hi = Scalar(1e-4),
                                                        Index window = 50) {
  AsymptoticRateEstimate<Scalar> out;
  const auto& err = trace.err_fro;
  auto in_band = [&](std::size_t t) {
    return err[t] >= lo * m_norm && err[t] <= hi * m_norm && err[t] > Scalar(0);
  };

  // Last maximal contiguous run of in-band rows.
  std::size_t run_end = 0, run_begin = 0;
  bool found = false;
  std::size_t t = trace.rows();
  while (t > 0) {
    --t;
    if (in_band(t)) {
      run_end = t;
      run_begin = t;
      while (run_begin > 0 && in_band(run_begin - 1)) --run_begin;
      found = true;
      break;
    }
  }
  if (!found || run_end == run_begin) return out;

  std::size_t first = run_end - run_begin > static_cast<std::size_t>(window)
                          ? run_end - static_cast<std::size_t>(window)
                          : run_begin;
  Index k_span = trace.iters[run_end] - trace.iters[first];
  if (k_span <= 0) return out;
  out.rho = std::exp((std::log(err[run_end]) - std::log(err[first])) / Scalar(k_span));
  out.points = static_cast<Index>(run_end - first);
  out.valid = true;
  return out;
}

}  // namespace lrc
