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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "railpricing/choice.h"
#include "railpricing/demand.h"
#include "railpricing/journey.h"
#include "railpricing/rng.h"
#include "railpricing/scenario.h"
#include "railpricing/supply.h"

namespace railpricing {

enum class action_mode { kContinuous, kDiscrete };

std::string_view to_string(action_mode);

// Descriptor of one agent's action space: a box [-1, 1]^dims or
// {0..10}^dims. Dimension k prices `labels_[k]`.
struct action_space {
  action_mode mode_{action_mode::kContinuous};
  std::size_t dims_{0U};
  std::vector<std::string> labels_;  // "service:origin-destination:seat"

  nlohmann::ordered_json to_json() const;
};

struct cell_observation {
  station_idx origin_;
  station_idx destination_;
  seat_class_idx seat_;
  money price_;
  std::optional<std::uint32_t> tickets_sold_;  // own services only
};

struct service_observation {
  service_idx service_;
  day_idx travel_date_{0};
  // Static attributes as integer indices.
  std::size_t operator_{0U};
  std::size_t corridor_{0U};
  std::size_t line_{0U};
  std::size_t time_slot_{0U};
  std::size_t rolling_stock_{0U};
  std::vector<cell_observation> cells_;
};

struct agent_observation {
  agent_idx agent_;
  day_idx day_{0};
  std::vector<service_observation> services_;

  nlohmann::ordered_json to_json(scenario const&) const;
};

struct step_info {
  day_idx day_{0};
  std::uint64_t passengers_generated_{0U};
  std::uint64_t passengers_travelled_{0U};
  std::uint64_t passengers_opted_out_{0U};
  std::vector<std::uint64_t> tickets_sold_;  // per agent, this step

  nlohmann::ordered_json to_json(scenario const&) const;
};

struct step_result {
  std::vector<agent_observation> observations_;
  std::vector<money> rewards_;  // per agent
  bool terminal_{false};
  step_info info_;

  nlohmann::ordered_json to_json(scenario const&) const;
};

// Per-agent actions indexed by agent. Continuous mode: alpha per
// dimension. Discrete mode: integral levels 0..10.
struct joint_action {
  std::vector<std::vector<double>> per_agent_;
};

struct passenger_record {
  passenger passenger_;
  bool travelled_{false};
  double utility_{kNoUtility};  // best candidate utility, also for opt-outs
  money spend_;
  std::vector<std::pair<std::size_t, std::size_t>> tickets_;  // instance, cell
};

struct episode_log {
  std::vector<passenger_record> passengers_;
  std::vector<std::vector<money>> rewards_;  // [step][agent]
  std::vector<step_info> steps_;
  std::vector<money> profit_;  // per agent
  bool complete_{false};
};

// The pricing Markov game. One instance is a serialised state machine:
// reset, then step until terminal.
class pricing_env {
public:
  explicit pricing_env(scenario, action_mode = action_mode::kContinuous);

  scenario const& get_scenario() const { return scenario_; }
  action_mode mode() const { return mode_; }
  std::size_t n_agents() const { return scenario_.agents_.size(); }

  // Seeds the instance and starts an episode.
  std::vector<agent_observation> reset(std::uint64_t seed);
  // Starts another episode drawing from the instance's stream.
  std::vector<agent_observation> reset();

  // Throws already_terminal or malformed_action.
  step_result step(joint_action const&);

  action_space get_action_space(agent_idx) const;
  action_space get_action_space(std::string_view agent_id) const;
  nlohmann::ordered_json observation_space(agent_idx) const;

  agent_observation observe(agent_idx) const;

  day_idx day() const { return day_; }
  bool terminal() const { return started_ && day_ == horizon(); }
  bool started() const { return started_; }
  day_idx horizon() const { return scenario_.episode_.horizon_days_; }
  supply_state const& supply() const { return supply_; }
  episode_log const& log() const { return log_; }
  money profit_of(agent_idx a) const { return profit_[a.get()]; }

  // Instance/cell pairs priced by dimension k of the agent's action.
  std::span<cell_adjustment const> dimension_cells(agent_idx,
                                                   std::size_t k) const;

private:
  struct dimension {
    std::string label_;
    std::vector<cell_adjustment> cells_;
  };

  void start_episode(std::uint64_t episode_seed);
  std::vector<journey> const& journeys_for(market_idx, day_idx);
  void validate(joint_action const&) const;

  scenario scenario_;
  action_mode mode_;
  std::vector<std::vector<dimension>> layout_;  // [agent][dim]

  rng master_{0U};
  rng demand_rng_{0U};
  rng choice_rng_{0U};

  supply_state supply_;
  day_idx day_{0};
  bool started_{false};
  std::uint64_t next_passenger_id_{0U};
  std::vector<money> profit_;
  std::map<std::pair<std::size_t, day_idx>, std::vector<journey>> journeys_;
  episode_log log_;
};

// sum_l gamma^l r_l. Throws out_of_range unless 0 <= gamma <= 1.
double discounted_return(std::span<double const> rewards, double gamma);

}  // namespace railpricing
