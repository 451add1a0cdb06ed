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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrc/verify.hpp"

namespace lrc {

enum class CheckStatus { Pass, Fail, NotApplicable };

inline const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotApplicable: return "not-applicable";
  }
  return "?";
}

struct CheckOutcome {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string detail;  // measured values and tolerances
};

inline bool all_passed(const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes)
    if (o.status == CheckStatus::Fail) return false;
  return true;
}

template <typename Scalar>
struct SuiteOptions {
  Scalar eta = Scalar(0);  // resolved absolute step size
  std::vector<Scalar> deltas{Scalar(1e-2), Scalar(5e-3), Scalar(2.5e-3), Scalar(1.25e-3)};
  int trials = 5;
  Scalar slope_lo = Scalar(1.8);
  Scalar slope_hi = Scalar(2.2);
  Index compare_kmax = 2000;
  Scalar sigma = Scalar(1e-2);      // init noise for the trace comparison
  Scalar band_lo = Scalar(1e-8);    // absolute error band for the trace comparison
  Scalar band_hi = Scalar(1e-4);
  Scalar band_log_tol = Scalar(0.5);  // natural-log half width around the true error
  Index dense_cap = kDefaultDenseCap;
};

namespace detail {

template <typename Scalar>
std::string describe(Scalar value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

template <typename Scalar>
CheckOutcome sweep_outcome(const std::string& name, const ScalingSweepResult<Scalar>& sweep,
                           const SuiteOptions<Scalar>& opts) {
  CheckOutcome out;
  out.name = name;
  if (!sweep.applicable) {
    out.status = CheckStatus::NotApplicable;
    out.detail = sweep.note;
    return out;
  }
  out.status = sweep.slope_in(opts.slope_lo, opts.slope_hi) ? CheckStatus::Pass : CheckStatus::Fail;
  out.detail = "fitted slope " + describe(sweep.fitted_slope) + ", expected in [" +
               describe(opts.slope_lo) + ", " + describe(opts.slope_hi) + "]";
  return out;
}

}  // namespace detail

/// Runs one of the named check suites on an instance. Selector is one of
/// recursion | projection | witness | tight | traces | all.
template <typename Scalar>
std::vector<CheckOutcome> run_suite(const ProblemInstance<Scalar>& instance,
                                    const std::string& selector,
                                    const SuiteOptions<Scalar>& opts) {
  bool all = selector == "all";
  if (!all && selector != "recursion" && selector != "projection" && selector != "witness" &&
      selector != "tight" && selector != "traces")
    throw std::invalid_argument("unknown suite selector '" + selector +
                                "' (expected recursion|projection|witness|tight|traces|all)");

  std::vector<CheckOutcome> outcomes;

  if (all || selector == "recursion") {
    auto sweep = check_recursion_residual(instance, opts.eta, opts.deltas, opts.trials);
    outcomes.push_back(detail::sweep_outcome("recursion-residual-quadratic", sweep, opts));
  }

  if (all || selector == "projection") {
    auto sweep = check_projection_residual(instance, opts.deltas, opts.trials);
    outcomes.push_back(detail::sweep_outcome("projection-residual-quadratic", sweep, opts));
  }

  if (all || selector == "witness") {
    auto witness = check_unsampled_fixed_points(instance, opts.eta);
    CheckOutcome out;
    out.name = "unsampled-fixed-points-exact";
    if (!witness.applicable) {
      out.status = CheckStatus::NotApplicable;
      out.detail = "every entry is observed";
    } else {
      out.status = witness.exact ? CheckStatus::Pass : CheckStatus::Fail;
      out.detail = std::to_string(witness.checked) +
                   " unsampled basis vectors checked bitwise, zero tolerance";
    }
    outcomes.push_back(out);
  }

  if (all || selector == "tight") {
    auto tight = check_tight_sweep(instance, opts.eta, opts.deltas, opts.dense_cap);
    outcomes.push_back(
        detail::sweep_outcome("dominant-direction-feasibility-quadratic", tight.sweep, opts));
    if (tight.sweep.applicable) {
      CheckOutcome construction;
      construction.name = "dominant-direction-construction";
      bool ok = tight.max_direction_asymmetry <= Scalar(1e-10) &&
                tight.max_offspace_leak <= Scalar(1e-10) &&
                tight.min_repaired_eigenvalue >= Scalar(-1e-12) && tight.feasibility_ok;
      construction.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
      construction.detail = "asymmetry/delta " + detail::describe(tight.max_direction_asymmetry) +
                            " (tol 1e-10), normal leak/delta " +
                            detail::describe(tight.max_offspace_leak) +
                            " (tol 1e-10), min repaired eigenvalue " +
                            detail::describe(tight.min_repaired_eigenvalue) + " (tol -1e-12)";
      outcomes.push_back(construction);
    }
  }

  if (all || selector == "traces") {
    MatrixX<Scalar> X0 = init_perturbed(instance.Xstar, opts.sigma, instance.seed);
    auto comp = compare_first_order_traces(instance, X0, opts.eta, opts.compare_kmax,
                                           opts.dense_cap, Scalar(1e-13) * instance.M.norm());
    bool projected_ok = true, plain_escapes = false;
    Index in_band = 0;
    for (std::size_t t = 0; t < comp.rows(); ++t) {
      Scalar err = comp.err_fro[t];
      if (err < opts.band_lo || err > opts.band_hi) continue;
      ++in_band;
      Scalar h = comp.model_projected[t];
      if (h <= Scalar(0) || std::abs(std::log(h) - std::log(err)) > opts.band_log_tol)
        projected_ok = false;
      Scalar a = comp.model_plain[t];
      if (a <= Scalar(0) || std::abs(std::log(a) - std::log(err)) > opts.band_log_tol)
        plain_escapes = true;
    }

    CheckOutcome tracks;
    tracks.name = "projected-model-tracks-error";
    CheckOutcome plateaus;
    plateaus.name = "plain-model-escapes-band";
    if (in_band == 0) {
      tracks.status = plateaus.status = CheckStatus::NotApplicable;
      tracks.detail = plateaus.detail =
          "no iterate with error in the band [" + detail::describe(opts.band_lo) + ", " +
          detail::describe(opts.band_hi) + "]";
    } else {
      tracks.status = projected_ok ? CheckStatus::Pass : CheckStatus::Fail;
      tracks.detail = std::to_string(in_band) + " iterates in band, log deviation tol " +
                      detail::describe(opts.band_log_tol);
      plateaus.status = plain_escapes ? CheckStatus::Pass : CheckStatus::Fail;
      plateaus.detail = "plain linear model must leave the band for at least one iterate";
    }
    outcomes.push_back(tracks);
    outcomes.push_back(plateaus);
  }

  return outcomes;
}

}  // namespace lrc
