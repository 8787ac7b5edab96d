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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "railpricing/env.h"
#include "railpricing/rng.h"
#include "railpricing/scenario.h"

namespace railpricing {

// Per-agent decision rule. A policy sees only its own agent's observation.
class agent_policy {
public:
  virtual ~agent_policy() = default;

  virtual std::vector<double> act(agent_observation const&) = 0;

  virtual void learn(agent_observation const& /* before */,
                     std::vector<double> const& /* action */,
                     double /* reward */,
                     agent_observation const& /* after */,
                     bool /* terminal */) {}

  virtual void end_episode() {}
};

// Uniform over [-1, 1]^d (continuous) or {0..10}^d (discrete).
std::vector<double> random_action(action_space const&, rng&);

class random_policy : public agent_policy {
public:
  random_policy(action_space, std::uint64_t seed);
  std::vector<double> act(agent_observation const&) override;

private:
  action_space space_;
  rng rng_;
};

// Plays schedule[day], repeating the last entry past its end.
class scripted_policy : public agent_policy {
public:
  scripted_policy(action_space const&, std::vector<std::vector<double>>);
  std::vector<double> act(agent_observation const&) override;

private:
  std::vector<std::vector<double>> schedule_;
};

// Scripted schedules per agent id, from
// {"schema_version": 1, "agents": {"agent_1": [[...], ...], ...}}.
std::map<std::string, std::vector<std::vector<double>>> load_script(
    std::string_view document);

struct q_config {
  double learning_rate_{0.1};
  double gamma_{0.99};
  double epsilon_start_{1.0};
  double epsilon_end_{0.05};
  std::uint64_t decay_episodes_{1000U};
};

// Q-table over string state keys and a fixed number of actions. Unseen
// states read as all zeros.
class q_table_learner {
public:
  q_table_learner(std::size_t n_actions, q_config);

  std::size_t n_actions() const { return n_actions_; }
  q_config const& config() const { return config_; }

  // Greedy action, ties broken by the lowest index.
  std::size_t greedy(std::string const& state) const;
  std::size_t epsilon_greedy(std::string const& state, double epsilon,
                             rng&) const;
  double value(std::string const& state, std::size_t action) const;

  void update(std::string const& state, std::size_t action, double reward,
              std::string const& next, bool terminal);

  std::size_t size() const { return table_.size(); }

  nlohmann::ordered_json to_json() const;
  static q_table_learner from_json(nlohmann::ordered_json const&);

private:
  std::size_t n_actions_;
  q_config config_;
  std::map<std::string, std::vector<double>> table_;
};

// Price bin of p against the initial price p0: round((p/p0 - 1) / 0.1),
// clamped to [-10, 10].
int price_bin(money p, money p0);

// Day index plus one price bin per priced cell of the agent.
std::string state_digest(scenario const&, agent_idx, agent_observation const&);

// Joint discrete levels <-> mixed-radix index over 11^d.
std::size_t encode_levels(std::span<double const> levels);
std::vector<double> decode_levels(std::size_t index, std::size_t dims);

class tabular_q_policy : public agent_policy {
public:
  // Throws incompatible_space for a continuous action space.
  tabular_q_policy(scenario const&, agent_idx, action_space const&, q_config,
                   std::uint64_t seed);

  std::vector<double> act(agent_observation const&) override;
  void learn(agent_observation const& before,
             std::vector<double> const& action, double reward,
             agent_observation const& after, bool terminal) override;
  void end_episode() override { ++episodes_; }

  // Switches between exploring/learning and greedy play.
  void set_training(bool training) { training_ = training; }
  bool training() const { return training_; }
  double epsilon() const;

  q_table_learner& learner() { return learner_; }
  q_table_learner const& learner() const { return learner_; }

private:
  scenario const* scenario_;
  agent_idx agent_;
  std::size_t dims_;
  q_table_learner learner_;
  rng rng_;
  bool training_{true};
  std::uint64_t episodes_{0U};
};

enum class action_bin : std::uint8_t {
  kMaxReduction,
  kModerateReduction,
  kNoChange,
  kModerateIncrease,
  kMaxIncrease
};

constexpr auto kActionBins = 5U;

std::string_view to_string(action_bin);

// Levels 0-1, 2-4, 5, 6-8, 9-10.
action_bin bin_of_level(int level);

struct policy_distribution_row {
  std::string agent_;
  std::string label_;  // action dimension label
  std::string market_;  // "origin-destination"
  std::array<double, kActionBins> frequency_{};
  std::uint64_t count_{0U};
};

struct policy_distribution {
  std::vector<policy_distribution_row> rows_;

  nlohmann::ordered_json to_json() const;
};

// One episode's actions, step by step.
using action_trace = std::vector<joint_action>;

// Throws empty_trace when no action was recorded, incompatible_space for a
// continuous environment.
policy_distribution log_policy_distribution(pricing_env const&,
                                            std::span<action_trace const>);

}  // namespace railpricing
