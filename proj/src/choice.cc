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

#include "railpricing/choice.h"

#include <cstdlib>

namespace railpricing {

double seat_screening_utility(passenger_type const& type,
                              supply_state const& supply,
                              std::size_t instance, std::size_t cell,
                              rng& r) {
  if (!supply.tickets_available(instance, cell)) {
    return kNoUtility;
  }
  auto const seat = supply.instance(instance).cells_[cell].seat_;
  return type.seat_utility_[seat.get()] + type.noise_.draw(r);
}

std::optional<std::vector<std::size_t>> screen_seats(
    passenger_type const& type, journey const& j, supply_state const& supply,
    rng& r) {
  std::vector<std::size_t> seats;
  seats.reserve(j.legs_.size());
  for (auto const& l : j.legs_) {
    auto const& inst = supply.instance(l.instance_);
    auto best = kNoUtility;
    std::optional<std::size_t> best_cell;
    for (auto c = 0U; c != inst.cells_.size(); ++c) {
      auto const& cell = inst.cells_[c];
      if (cell.origin_ != l.from_ || cell.destination_ != l.to_) {
        continue;
      }
      auto const u = seat_screening_utility(type, supply, l.instance_, c, r);
      if (u > best) {
        best = u;
        best_cell = c;
      }
    }
    if (!best_cell.has_value()) {
      return std::nullopt;
    }
    seats.push_back(*best_cell);
  }
  return seats;
}

utility_breakdown journey_utility(scenario const& s, passenger const& p,
                                  journey const& j,
                                  std::span<std::size_t const> seats,
                                  supply_state const& supply, rng& r) {
  utility_breakdown u;
  if (j.legs_.empty() || seats.size() != j.legs_.size()) {
    return u;
  }
  auto const& type = s.passenger_types_[p.type_.get()];

  auto affinity = 0.0;
  money price;
  for (auto i = 0U; i != j.legs_.size(); ++i) {
    auto const& l = j.legs_[i];
    if (!supply.tickets_available(l.instance_, seats[i])) {
      return u;
    }
    auto const& inst = supply.instance(l.instance_);
    auto const& cell = inst.cells_[seats[i]];
    affinity += type.tsp_affinity_[inst.operator_.get()] +
                type.seat_utility_[cell.seat_.get()];
    price += cell.price_;
  }

  u.tsp_seat_ = affinity / static_cast<double>(j.legs_.size());
  u.arrival_ = type.arrival_penalty_(std::abs(j.arrival() - p.preferred_arrival_));
  u.departure_ =
      type.departure_penalty_(std::abs(j.departure() - p.preferred_departure_));
  u.price_ = type.price_sensitivity_(price.units());
  u.travel_time_ = type.travel_time_penalty_(total_travel_time(j));
  u.transfer_time_ = type.transfer_time_penalty_(total_transfer_time(j));
  u.transfer_count_ = type.transfer_count_penalty_ * n_transfers(j);
  u.noise_ = type.noise_.draw(r);
  u.total_ = u.tsp_seat_ - u.arrival_ - u.departure_ - u.price_ -
             u.travel_time_ - u.transfer_time_ - u.transfer_count_ + u.noise_;
  return u;
}

choice choose_journey(scenario const& s, passenger const& p,
                      std::span<journey const> candidates,
                      supply_state const& supply, rng& r) {
  auto const& type = s.passenger_types_[p.type_.get()];
  choice best;
  for (auto i = 0U; i != candidates.size(); ++i) {
    auto const seats = screen_seats(type, candidates[i], supply, r);
    if (!seats.has_value()) {
      continue;
    }
    auto const u = journey_utility(s, p, candidates[i], *seats, supply, r);
    if (u.total_ > best.utility_.total_) {
      best.journey_ = i;
      best.seats_ = *seats;
      best.utility_ = u;
    }
  }
  if (!(best.utility_.total_ > 0.0)) {
    best.journey_.reset();
    best.seats_.clear();
  }
  return best;
}

}  // namespace railpricing
