// Copyright 2026 The railpricing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace railpricing {

// Random stream used throughout the simulator.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The distribution code below is written out by hand because the
// standard library distributions are implementation-defined, and episodes
// have to replay bit-for-bit on every platform.
class rng {
public:
  explicit rng(std::uint64_t seed = 0U) : engine_{seed} {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
  }

  // Uniform on (0, 1), never returns 0.
  double uniform_open01() {
    return (static_cast<double>(engine_() >> 11U) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer on [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  // Gumbel(location 0, scale).
  double gumbel(double scale);

  // Normal(0, scale) by Marsaglia's polar method.
  double normal(double scale);

  std::uint64_t poisson(double mean);

  // Index drawn from probabilities that sum to one.
  std::size_t categorical(std::span<double const> probabilities);

private:
  std::mt19937_64 engine_;
};

// Derives the seed of an independent sub-stream (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace railpricing
