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
#include <string_view>
#include <vector>

#include "railpricing/common.h"
#include "railpricing/scenario.h"
#include "railpricing/supply.h"

namespace railpricing {

// One ride on one service instance between two of its stops.
struct leg {
  std::size_t instance_{0U};
  service_idx service_;
  std::size_t board_stop_{0U};  // index into the line's stops
  std::size_t alight_stop_{0U};
  station_idx from_;
  station_idx to_;
  minutes departure_{0};
  minutes arrival_{0};

  friend bool operator==(leg const&, leg const&) = default;
};

struct journey {
  std::vector<leg> legs_;
  station_idx origin_;
  station_idx destination_;
  day_idx travel_date_{0};

  minutes departure() const { return legs_.front().departure_; }
  minutes arrival() const { return legs_.back().arrival_; }

  friend bool operator==(journey const&, journey const&) = default;
};

enum class journey_violation {
  kNone,
  kEmpty,
  kWrongOrigin,
  kWrongDestination,
  kDisconnected,  // alighting station != next boarding station
  kTransferTooShort,  // gap below the minimum transfer time
  kRepeatedStation,
  kRepeatedService,
  kBadLeg,  // leg arrives before it departs
};

std::string_view to_string(journey_violation);

// First violated validity condition, checked in enum order.
journey_violation check_journey(journey const&, minutes min_transfer);

std::uint32_t n_transfers(journey const&);
minutes total_transfer_time(journey const&);
minutes total_travel_time(journey const&);

// Every valid journey with at most `max_transfers` transfers, ordered by
// departure time, then leg count, then service ids. Legs are only formed
// between stops for which the service sells at least one seat cell.
// Throws unknown_market if the market is not declared in the scenario.
std::vector<journey> enumerate_journeys(scenario const&, supply_state const&,
                                        market_idx, day_idx travel_date,
                                        minutes min_transfer,
                                        std::uint32_t max_transfers);
std::vector<journey> enumerate_journeys(scenario const&, supply_state const&,
                                        station_idx origin,
                                        station_idx destination,
                                        day_idx travel_date,
                                        minutes min_transfer,
                                        std::uint32_t max_transfers);

// All sellable legs of the instances running on `travel_date`.
std::vector<leg> candidate_legs(scenario const&, supply_state const&,
                                day_idx travel_date);

// Strict weak order used for the enumeration output.
bool journey_order(scenario const&, journey const&, journey const&);

}  // namespace railpricing
