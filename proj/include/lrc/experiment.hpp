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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "lrc/gd.hpp"
#include "lrc/linear_operator.hpp"
#include "lrc/problem.hpp"
#include "lrc/types.hpp"

namespace lrc {

/// Everything needed to reproduce one experiment from a single seed.
/// Defaults mirror the reference setup: a 20x3 Gaussian factor, Bernoulli
/// sampling with probability 0.3, initialization noise 1e-2, and step size
/// 0.5 over the spectral norm of the ground truth.
template <typename Scalar>
struct ExperimentConfig {
  Index n = 20;
  Index r = 3;
  double p = 0.3;
  Scalar sigma = Scalar(1e-2);
  StepSizeRule<Scalar> eta_rule{};
  Index max_iters = 2000;
  std::optional<Scalar> stop_tol;  // absent: 1e-12 times the norm of M
  std::uint64_t seed = 1;
  std::string output_path;
  enum class InitMode { Perturbed, Spectral } init_mode = InitMode::Perturbed;
  Index record_every = 1;
  Index dense_cap = kDefaultDenseCap;

  void validate() const {
    if (n < 1 || r < 1 || r > n)
      throw std::invalid_argument("config: require 1 <= r <= n");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("config: require 0 < p <= 1");
    if (sigma < Scalar(0)) throw std::invalid_argument("config: sigma must be nonnegative");
    if (eta_rule.kind == StepSizeRule<Scalar>::Kind::Absolute && eta_rule.value < Scalar(0))
      throw std::invalid_argument("config: absolute eta must be nonnegative");
    if (eta_rule.kind == StepSizeRule<Scalar>::Kind::OverSpectralNorm &&
        !(eta_rule.value > Scalar(0)))
      throw std::invalid_argument("config: eta rule constant must be positive");
    if (max_iters < 1) throw std::invalid_argument("config: max_iters must be at least 1");
    if (stop_tol && *stop_tol < Scalar(0))
      throw std::invalid_argument("config: stop_tol must be nonnegative");
    if (record_every < 1) throw std::invalid_argument("config: record_every must be at least 1");
    if (dense_cap < 1) throw std::invalid_argument("config: dense_cap must be positive");
  }
};

template <typename Scalar>
ProblemInstance<Scalar> build_instance(const ExperimentConfig<Scalar>& config) {
  config.validate();
  ProblemInstance<Scalar> inst = generate_instance<Scalar>(config.n, config.r, config.seed);
  inst.p = config.p;
  inst.mask = sample_bernoulli_symmetric<Scalar>(config.n, config.p, config.seed);
  return inst;
}

template <typename Scalar>
Scalar resolve_eta(const ExperimentConfig<Scalar>& config, const ProblemInstance<Scalar>& inst) {
  return config.eta_rule.resolve(inst.spectral_norm());
}

template <typename Scalar>
Scalar resolve_stop_tol(const ExperimentConfig<Scalar>& config,
                        const ProblemInstance<Scalar>& inst) {
  return config.stop_tol ? *config.stop_tol : Scalar(1e-12) * inst.M.norm();
}

template <typename Scalar>
GdConfig<Scalar> make_gd_config(const ExperimentConfig<Scalar>& config,
                                const ProblemInstance<Scalar>& inst) {
  GdConfig<Scalar> gd;
  gd.eta = resolve_eta(config, inst);
  gd.max_iters = config.max_iters;
  gd.stop_tol = resolve_stop_tol(config, inst);
  gd.record_every = config.record_every;
  return gd;
}

template <typename Scalar>
struct InitialIterate {
  MatrixX<Scalar> X0;
  bool spectral_deficient = false;
};

template <typename Scalar>
InitialIterate<Scalar> make_initial_iterate(const ExperimentConfig<Scalar>& config,
                                            const ProblemInstance<Scalar>& inst) {
  InitialIterate<Scalar> out;
  if (config.init_mode == ExperimentConfig<Scalar>::InitMode::Perturbed) {
    out.X0 = init_perturbed(inst.Xstar, config.sigma, config.seed);
  } else {
    auto spectral = init_spectral(inst.mask.filter(inst.M), inst.mask, config.p, inst.r);
    out.X0 = std::move(spectral.X0);
    out.spectral_deficient = spectral.deficient;
  }
  return out;
}

}  // namespace lrc
