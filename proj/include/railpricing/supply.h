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

#include "railpricing/common.h"
#include "railpricing/scenario.h"

namespace railpricing {

constexpr auto kDiscreteLevels = 11;

// Highest price a cell can reach, in cents. Price increases saturate here
// instead of overflowing the 64-bit ledger.
constexpr std::int64_t kPriceCeilingCents = 100'000'000'000'000LL;

// p * (1 + alpha * beta / 100), evaluated exactly on the binary values of
// alpha and beta, rounded half-to-even to whole cents and clipped to
// [0, kPriceCeilingCents].
money apply_price_change(money p, double alpha, double beta_percent);

// Maps a discrete action level 0..10 to alpha in {-1.0, -0.8, ..., +1.0}.
double discretize_action(int level);

struct seat_cell {
  station_idx origin_;
  station_idx destination_;
  seat_class_idx seat_;
  money price_;
  std::uint32_t capacity_{0U};
  std::uint32_t sold_{0U};
};

// One operated run of a service template on a travel date.
struct service_instance {
  service_idx service_;
  agent_idx operator_;
  day_idx travel_date_{0};
  std::vector<seat_cell> cells_;
  money revenue_;

  std::optional<std::size_t> find_cell(station_idx origin,
                                       station_idx destination,
                                       seat_class_idx seat) const;
};

struct cell_adjustment {
  std::size_t instance_{0U};
  std::size_t cell_{0U};
  double alpha_{0.0};
};

struct sale {
  std::size_t instance_{0U};
  std::size_t cell_{0U};
  money price_;
};

// Seat inventory and prices of every service instance in an episode.
class supply_state {
public:
  supply_state() = default;
  explicit supply_state(scenario const&);

  std::span<service_instance const> instances() const { return instances_; }
  service_instance const& instance(std::size_t i) const {
    return instances_.at(i);
  }
  std::span<std::size_t const> instances_on(day_idx travel_date) const;

  // Applies every adjustment or none. Throws not_owner if any touched
  // instance belongs to another agent, out_of_range on |alpha| > 1.
  void apply_price_action(agent_idx, std::span<cell_adjustment const>,
                          double beta_percent);

  // Throws sold_out when the cell has no seats left.
  money sell_ticket(std::size_t instance, std::size_t cell);
  money sell_ticket(std::size_t instance, station_idx origin,
                    station_idx destination, seat_class_idx seat);

  bool tickets_available(std::size_t instance, std::size_t cell) const;
  // Throws unknown_cell.
  bool tickets_available(std::size_t instance, station_idx origin,
                         station_idx destination, seat_class_idx seat) const;

  money revenue_of(agent_idx) const;
  money total_revenue() const;
  std::span<sale const> ledger() const { return ledger_; }

private:
  std::size_t cell_or_throw(std::size_t instance, station_idx origin,
                            station_idx destination, seat_class_idx seat) const;

  std::vector<service_instance> instances_;
  day_idx first_date_{0};
  std::vector<std::vector<std::size_t>> by_date_;
  std::vector<sale> ledger_;
};

}  // namespace railpricing
