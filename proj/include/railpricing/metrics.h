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
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "railpricing/env.h"
#include "railpricing/scenario.h"

namespace railpricing {

// 1 - sum_i sum_j |R_i - R_j| / (2 N sum_i R_i). Throws degenerate_input
// for fewer than two agents, negative or non-finite profits, or an all-zero
// vector.
double equality(std::span<double const> profits);

// Attention weights indexed [head][time][target]. Each innermost vector
// must be non-negative and sum to 1 within 1e-6.
using attention_weights = std::vector<std::vector<std::vector<double>>>;

constexpr auto kEntropyEpsilon = 1e-8;

// Head- and time-averaged entropy in nats. Each row's entropy is floored at
// 0, since epsilon pushes a one-hot row slightly below. Throws
// malformed_weights.
double attention_entropy(attention_weights const&,
                         double epsilon = kEntropyEpsilon);

// Entropy per agent for weights indexed [agent][head][time][target].
std::vector<double> attention_entropy(
    std::vector<attention_weights> const& per_agent,
    double epsilon = kEntropyEpsilon);

// Streaming mean and population variance (Welford). Each call first folds
// r into the statistics, then returns (r - mean) / sqrt(var + epsilon).
class reward_normalizer {
public:
  explicit reward_normalizer(double epsilon = 1e-8);

  double update_and_normalize(double r);
  void reset();

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double epsilon() const { return epsilon_; }

private:
  double epsilon_;
  std::uint64_t n_{0U};
  double mean_{0.0};
  double m2_{0.0};
};

struct episode_report {
  std::vector<money> profit_;  // per agent
  std::uint64_t generated_{0U};
  std::uint64_t travelled_{0U};
  // Over travellers; empty when nobody travelled.
  std::optional<double> mean_utility_travellers_;
  // Over all generated passengers, opt-outs counted as 0.
  std::optional<double> mean_utility_all_;
  std::optional<double> percent_travelling_;
  std::vector<std::uint64_t> generated_by_type_;
  std::vector<std::uint64_t> travelled_by_type_;
  std::vector<std::optional<double>> percent_travelling_by_type_;
  std::optional<double> equality_;  // empty for one agent or zero profits

  nlohmann::ordered_json to_json(scenario const&) const;
};

// Throws incomplete_episode unless the log covers a finished episode.
episode_report make_episode_report(scenario const&, episode_log const&);

}  // namespace railpricing
