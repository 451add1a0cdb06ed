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
#include <random>

#include "lrc/types.hpp"

namespace lrc {

/// Reproducibility scheme: every randomized routine owns a named substream of
/// the experiment seed, so one seed fixes the factor draw, the sampling set,
/// the initialization noise, the spectral-radius probes, and the sweep
/// directions independently of each other. Substream seeds are derived with
/// splitmix64 and feed std::mt19937_64.
enum class Stream : std::uint64_t {
  Factor = 1,  // ground-truth factor entries
  Mask = 2,    // Bernoulli sampling of observed entries
  Noise = 3,   // initialization noise
  Probe = 4,   // spectral-radius probe vectors
  Sweep = 5,   // perturbation directions in scaling sweeps
};

inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-substreams";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Fixed stream-splitting rule: seed -> substream -> attempt.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, Stream stream,
                                              std::uint64_t attempt = 0) {
  return splitmix64(splitmix64(seed + static_cast<std::uint64_t>(stream)) + attempt);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream,
                                std::uint64_t attempt = 0) {
  return std::mt19937_64(substream_seed(seed, stream, attempt));
}

/// i.i.d. standard normal entries, filled column by column.
template <typename Scalar>
MatrixX<Scalar> gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  MatrixX<Scalar> out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

template <typename Scalar>
VectorX<Scalar> gaussian_vector(Index size, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  VectorX<Scalar> out(size);
  for (Index i = 0; i < size; ++i) out(i) = normal(rng);
  return out;
}

}  // namespace lrc
