// Copyright 2026 The StrataFlow Authors
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

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace strataflow {

/// SplitMix64 finalizer. Used to turn structured keys into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and an ordered list of key parts,
/// e.g. derive_seed(run_seed, {node, substream, interval}). Order matters.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> parts) noexcept;

/// xoshiro256** seeded through SplitMix64. The bitstream is part of the
/// repository's reproducibility contract: same seed, same draws, on every
/// platform. Satisfies UniformRandomBitGenerator so it can drive <random>
/// distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform integer in [0, bound). bound must be > 0. Lemire's multiply-shift
  /// with rejection, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform real in [0, 1) built from the top 53 bits.
  double uniform01() noexcept;

  /// An independent generator keyed by `stream`, leaving this one untouched.
  Rng split(std::uint64_t stream) const noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
};

}  // namespace strataflow
