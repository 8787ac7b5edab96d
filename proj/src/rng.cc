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

#include "railpricing/rng.h"

#include <cmath>

namespace railpricing {

std::uint64_t rng::below(std::uint64_t n) {
  if (n <= 1U) {
    return 0U;
  }
  auto const limit = std::uint64_t{0} - (std::uint64_t{0} - n) % n;
  while (true) {
    auto const x = engine_();
    if (limit == 0U || x < limit) {
      return x % n;
    }
  }
}

double rng::gumbel(double scale) {
  return -scale * std::log(-std::log(uniform_open01()));
}

double rng::normal(double scale) {
  while (true) {
    auto const u = 2.0 * uniform01() - 1.0;
    auto const v = 2.0 * uniform01() - 1.0;
    auto const s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return scale * u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

std::uint64_t rng::poisson(double mean) {
  if (!(mean > 0.0)) {
    return 0U;
  }
  // Sum of independent Poisson variables is Poisson, so large means are
  // split into chunks small enough for the multiplication method.
  constexpr auto kChunk = 16.0;
  std::uint64_t total = 0U;
  while (mean > 0.0) {
    auto const m = std::min(mean, kChunk);
    mean -= m;
    auto const limit = std::exp(-m);
    auto p = uniform_open01();
    while (p > limit) {
      ++total;
      p *= uniform_open01();
    }
  }
  return total;
}

std::size_t rng::categorical(std::span<double const> probabilities) {
  auto const u = uniform01();
  auto acc = 0.0;
  for (auto i = std::size_t{0U}; i != probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) {
      return i;
    }
  }
  // Rounding left u above the accumulated sum: take the last non-zero bin.
  for (auto i = probabilities.size(); i != 0U; --i) {
    if (probabilities[i - 1] > 0.0) {
      return i - 1;
    }
  }
  return 0U;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  auto z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1U);
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

}  // namespace railpricing
