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
#include <vector>

#include "railpricing/common.h"
#include "railpricing/rng.h"
#include "railpricing/scenario.h"

namespace railpricing {

struct passenger {
  std::uint64_t id_{0U};
  passenger_type_idx type_;
  market_idx market_;
  day_idx desired_travel_date_{0};
  day_idx purchase_day_{0};
  minutes preferred_departure_{0};
  minutes preferred_arrival_{0};

  friend bool operator==(passenger const&, passenger const&) = default;
};

// Demand of booking day t (1 <= t <= T). Markets are visited in scenario
// order; for each one the volume is drawn first, then each passenger's type,
// travel date and preferred times. Ids continue from `first_id`.
std::vector<passenger> sample_daily_demand(scenario const&, day_idx t, rng&,
                                           std::uint64_t first_id = 0U);

}  // namespace railpricing
