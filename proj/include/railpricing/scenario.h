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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "railpricing/common.h"
#include "railpricing/rng.h"

namespace railpricing {

constexpr int kSchemaVersion = 1;

enum class travel_date_mode { single_terminal_date, per_passenger_date };

enum class volume_distribution { poisson, constant };

enum class noise_distribution { gumbel, normal, none };

// Non-negative penalty as a function of a non-negative quantity (minutes,
// currency, ...). Either slope * x, or piecewise-linear through `points`
// and held constant outside them.
struct penalty_curve {
  static penalty_curve linear(double slope) { return {slope, {}}; }

  double operator()(double x) const;
  bool is_linear() const { return points_.empty(); }

  double slope_{0.0};
  std::vector<std::pair<double, double>> points_;

  friend bool operator==(penalty_curve const&, penalty_curve const&) = default;
};

struct noise_spec {
  noise_distribution distribution_{noise_distribution::gumbel};
  double scale_{1.0};

  double draw(rng&) const;

  friend bool operator==(noise_spec const&, noise_spec const&) = default;
};

struct time_window {
  minutes from_{0};
  minutes to_{0};
  friend bool operator==(time_window const&, time_window const&) = default;
};

struct passenger_type {
  std::string id_;
  std::vector<double> tsp_affinity_;  // per agent
  std::vector<double> seat_utility_;  // per seat class
  penalty_curve arrival_penalty_;  // over |arrival - preferred arrival|
  penalty_curve departure_penalty_;  // over |departure - preferred departure|
  penalty_curve price_sensitivity_;  // over summed ticket prices
  penalty_curve travel_time_penalty_;
  penalty_curve transfer_time_penalty_;
  double transfer_count_penalty_{0.0};  // per transfer
  noise_spec noise_;
  // Probability of buying d days before the travel date, d = 0, 1, ...
  std::vector<double> purchase_anticipation_{1.0};
  time_window preferred_departure_;
  time_window preferred_arrival_;

  friend bool operator==(passenger_type const&, passenger_type const&) =
      default;
};

struct market_demand {
  station_idx origin_;
  station_idx destination_;
  volume_distribution distribution_{volume_distribution::poisson};
  double mean_{0.0};  // expected passengers per booking day
  std::vector<double> type_mixture_;  // per passenger type

  friend bool operator==(market_demand const&, market_demand const&) = default;
};

struct corridor {
  std::string id_;
  std::vector<station_idx> stations_;
  friend bool operator==(corridor const&, corridor const&) = default;
};

struct line {
  std::string id_;
  std::size_t corridor_{0U};
  std::vector<station_idx> stops_;
  friend bool operator==(line const&, line const&) = default;
};

struct rolling_stock {
  std::string id_;
  std::vector<std::uint32_t> capacity_;  // per seat class
  friend bool operator==(rolling_stock const&, rolling_stock const&) = default;
};

struct price_cell {
  station_idx origin_;
  station_idx destination_;
  seat_class_idx seat_;
  money price_;
  friend bool operator==(price_cell const&, price_cell const&) = default;
};

struct service_template {
  std::string id_;
  agent_idx operator_;
  std::size_t line_{0U};
  std::vector<minutes> times_;  // one clock time per line stop
  std::size_t rolling_stock_{0U};
  std::vector<price_cell> prices_;

  friend bool operator==(service_template const&,
                         service_template const&) = default;
};

struct agent_spec {
  std::string id_;
  std::vector<service_idx> services_;
  friend bool operator==(agent_spec const&, agent_spec const&) = default;
};

struct episode_spec {
  int horizon_days_{1};
  travel_date_mode travel_date_mode_{travel_date_mode::single_terminal_date};
  double passengers_expected_total_{0.0};
  friend bool operator==(episode_spec const&, episode_spec const&) = default;
};

struct scenario {
  std::string name_;
  std::string calibration_{"user"};
  std::vector<std::string> stations_;
  std::vector<std::string> seat_classes_;
  std::vector<corridor> corridors_;
  std::vector<line> lines_;
  std::vector<rolling_stock> rolling_stock_;
  std::vector<agent_spec> agents_;
  std::vector<service_template> services_;
  std::vector<passenger_type> passenger_types_;
  std::vector<market_demand> markets_;
  episode_spec episode_;
  minutes min_transfer_minutes_{0};
  std::uint32_t max_transfers_{2U};
  minutes time_slot_minutes_{60};
  double price_step_percent_{25.0};

  line const& line_of(service_idx s) const {
    return lines_[services_[s.get()].line_];
  }
  std::optional<station_idx> find_station(std::string_view id) const;
  std::optional<agent_idx> find_agent(std::string_view id) const;
  std::optional<market_idx> find_market(station_idx from, station_idx to) const;

  // Range of travel dates tickets are sold for. Single-terminal-date mode
  // has exactly one, the day after the last booking day.
  day_idx first_travel_date() const;
  day_idx last_travel_date() const;

  friend bool operator==(scenario const&, scenario const&) = default;
};

// Parses and validates a scenario document (JSON text).
// Throws syntax_error or validation_error (with the offending key path).
scenario load_scenario(std::string_view document);

// Reads `path` if it names a file, otherwise looks it up as a preset name.
scenario load_scenario_arg(std::string const& path_or_preset);

// Canonical document text; load_scenario(serialize(s)) == s.
std::string serialize(scenario const&);

// Checks every invariant; throws validation_error.
void validate(scenario const&);

// Built-in scenarios: "business" and "business_student".
scenario preset(std::string_view name);

// FNV-1a over the canonical document, for run manifests.
std::uint64_t scenario_hash(scenario const&);

}  // namespace railpricing
