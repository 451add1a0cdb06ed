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

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrc/experiment.hpp"
#include "lrc/problem.hpp"
#include "lrc/rate.hpp"
#include "lrc/suite.hpp"
#include "lrc/verify.hpp"

// File formats. Instances and reports are JSON; traces are CSV with a fixed
// header, one row per recorded iteration, and floating-point values printed
// with 17 significant digits in the C locale so they round-trip exactly.

namespace lrc {

using json = nlohmann::json;

inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- instance files ----------------------------------------------------------

inline json instance_to_json(const ProblemInstance<double>& inst) {
  json doc;
  doc["n"] = inst.n;
  doc["r"] = inst.r;
  doc["seed"] = inst.seed;
  doc["p"] = inst.p;
  doc["generator_name"] = inst.generator_name;
  std::vector<double> xstar;
  xstar.reserve(static_cast<std::size_t>(inst.n * inst.r));
  for (Index i = 0; i < inst.n; ++i)  // row-major
    for (Index j = 0; j < inst.r; ++j) xstar.push_back(inst.Xstar(i, j));
  doc["Xstar"] = xstar;
  json omega = json::array();
  for (const auto& [i, j] : inst.mask.entries) omega.push_back({i, j});
  doc["omega"] = omega;
  return doc;
}

inline ProblemInstance<double> instance_from_json(const json& doc) {
  Index n = doc.at("n").get<Index>();
  Index r = doc.at("r").get<Index>();
  auto seed = doc.at("seed").get<std::uint64_t>();
  double p = doc.at("p").get<double>();

  const auto& xstar = doc.at("Xstar");
  if (static_cast<Index>(xstar.size()) != n * r)
    throw std::invalid_argument("instance file: Xstar length does not match n*r");
  MatrixX<double> X(n, r);
  std::size_t idx = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < r; ++j) X(i, j) = xstar.at(idx++).get<double>();

  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& pair : doc.at("omega")) {
    if (pair.size() != 2) throw std::invalid_argument("instance file: malformed omega pair");
    pairs.emplace_back(pair.at(0).get<Index>(), pair.at(1).get<Index>());
  }

  auto inst = assemble_instance<double>(n, r, seed, p, std::move(X),
                                        SamplingMask<double>::from_pairs(n, pairs));
  if (doc.contains("generator_name")) inst.generator_name = doc.at("generator_name");
  return inst;
}

inline void write_instance(const ProblemInstance<double>& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

inline ProblemInstance<double> read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read instance file: " + path);
  json doc = json::parse(in);
  return instance_from_json(doc);
}

// --- trace CSV ----------------------------------------------------------------

inline void write_trace_csv(const ConvergenceTrace<double>& trace, std::ostream& out) {
  out << "iter,err_fro,grad_fro,obj\n";
  for (std::size_t t = 0; t < trace.rows(); ++t)
    out << trace.iters[t] << ',' << format_full(trace.err_fro[t]) << ','
        << format_full(trace.grad_fro[t]) << ',' << format_full(trace.obj[t]) << '\n';
}

inline void write_comparison_csv(const FirstOrderComparison<double>& comp, std::ostream& out) {
  out << "iter,err_fro,pred_A,pred_H,bound\n";
  for (std::size_t t = 0; t < comp.rows(); ++t)
    out << comp.iters[t] << ',' << format_full(comp.err_fro[t]) << ','
        << format_full(comp.model_plain[t]) << ',' << format_full(comp.model_projected[t]) << ','
        << format_full(comp.bound[t]) << '\n';
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  writer(out);
}

// --- rate report ---------------------------------------------------------------

inline json rate_report_to_json(const RateReport<double>& report, double elapsed_seconds) {
  json doc;
  doc["rho_H"] = report.rho_H;
  doc["rho_A"] = report.rho_A;
  doc["contracts"] = report.contracts;
  doc["eta"] = report.eta;
  doc["method"] = to_string(report.method);
  if (report.dominant) {
    doc["dominant_eigenvalue"] = {{"real", report.dominant->real()},
                                  {"imag", report.dominant->imag()}};
  }
  doc["timing"] = {{"seconds", elapsed_seconds}};
  return doc;
}

// --- verification report ---------------------------------------------------------

inline void write_verification_report(const std::vector<CheckOutcome>& outcomes,
                                      std::ostream& out) {
  for (const auto& o : outcomes)
    out << "check " << o.name << ": " << to_string(o.status)
        << (o.detail.empty() ? "" : " -- " + o.detail) << '\n';
  out << (all_passed(outcomes) ? "all checks passed" : "SOME CHECKS FAILED") << '\n';
}

// --- experiment config -----------------------------------------------------------

inline ExperimentConfig<double> config_from_json(const json& doc) {
  ExperimentConfig<double> config;
  if (doc.contains("n")) config.n = doc.at("n").get<Index>();
  if (doc.contains("r")) config.r = doc.at("r").get<Index>();
  if (doc.contains("p")) config.p = doc.at("p").get<double>();
  if (doc.contains("sigma")) config.sigma = doc.at("sigma").get<double>();
  if (doc.contains("eta")) {
    const auto& eta = doc.at("eta");
    std::string rule = eta.value("rule", "over-spectral-norm");
    double value = eta.at("value").get<double>();
    if (rule == "absolute") {
      config.eta_rule = StepSizeRule<double>::absolute(value);
    } else if (rule == "over-spectral-norm") {
      config.eta_rule = StepSizeRule<double>::over_spectral_norm(value);
    } else {
      throw std::invalid_argument("config: unknown eta rule '" + rule + "'");
    }
  }
  if (doc.contains("max_iters")) config.max_iters = doc.at("max_iters").get<Index>();
  if (doc.contains("stop_tol")) config.stop_tol = doc.at("stop_tol").get<double>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("output_path")) config.output_path = doc.at("output_path");
  if (doc.contains("init_mode")) {
    std::string mode = doc.at("init_mode");
    if (mode == "perturbed") {
      config.init_mode = ExperimentConfig<double>::InitMode::Perturbed;
    } else if (mode == "spectral") {
      config.init_mode = ExperimentConfig<double>::InitMode::Spectral;
    } else {
      throw std::invalid_argument("config: unknown init_mode '" + mode + "'");
    }
  }
  if (doc.contains("record_every")) config.record_every = doc.at("record_every").get<Index>();
  if (doc.contains("dense_cap")) config.dense_cap = doc.at("dense_cap").get<Index>();
  return config;
}

inline ExperimentConfig<double> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  return config_from_json(json::parse(in));
}

}  // namespace lrc
