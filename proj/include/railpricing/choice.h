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

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "railpricing/demand.h"
#include "railpricing/journey.h"
#include "railpricing/rng.h"
#include "railpricing/scenario.h"
#include "railpricing/supply.h"

namespace railpricing {

constexpr auto kNoUtility = -std::numeric_limits<double>::infinity();

// Terms of a journey's utility. Penalties are stored as positive numbers
// and subtracted in `total_`.
struct utility_breakdown {
  double tsp_seat_{0.0};  // mean over legs of operator affinity + seat utility
  double arrival_{0.0};
  double departure_{0.0};
  double price_{0.0};
  double travel_time_{0.0};
  double transfer_time_{0.0};
  double transfer_count_{0.0};
  double noise_{0.0};
  double total_{kNoUtility};

  bool feasible() const { return total_ != kNoUtility; }
};

// delta_ck plus a noise draw, or -inf when the cell is sold out.
double seat_screening_utility(passenger_type const&, supply_state const&,
                              std::size_t instance, std::size_t cell, rng&);

// Best seat cell per leg by screening utility; nullopt if some leg has no
// seat left. Ties keep the first cell.
std::optional<std::vector<std::size_t>> screen_seats(passenger_type const&,
                                                     journey const&,
                                                     supply_state const&,
                                                     rng&);

// Utility of `j` with one seat cell per leg. Draws one noise value, unless
// a chosen cell is sold out, in which case the total is -inf and nothing is
// drawn.
utility_breakdown journey_utility(scenario const&, passenger const&,
                                  journey const&,
                                  std::span<std::size_t const> seats,
                                  supply_state const&, rng&);

struct choice {
  std::optional<std::size_t> journey_;  // index into the candidates
  std::vector<std::size_t> seats_;
  utility_breakdown utility_;

  bool travels() const { return journey_.has_value(); }
};

// Picks the highest-utility candidate if its utility is strictly positive,
// otherwise the passenger does not travel. Does not touch the inventory.
choice choose_journey(scenario const&, passenger const&,
                      std::span<journey const> candidates,
                      supply_state const&, rng&);

}  // namespace railpricing
