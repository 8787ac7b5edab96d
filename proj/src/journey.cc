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

#include "railpricing/journey.h"

#include <algorithm>
#include <set>
#include <string>

namespace railpricing {

std::string_view to_string(journey_violation v) {
  switch (v) {
    case journey_violation::kNone: return "none";
    case journey_violation::kEmpty: return "empty";
    case journey_violation::kWrongOrigin: return "wrong_origin";
    case journey_violation::kWrongDestination: return "wrong_destination";
    case journey_violation::kDisconnected: return "disconnected";
    case journey_violation::kTransferTooShort: return "transfer_too_short";
    case journey_violation::kRepeatedStation: return "repeated_station";
    case journey_violation::kRepeatedService: return "repeated_service";
    case journey_violation::kBadLeg: return "bad_leg";
  }
  return "unknown";
}

journey_violation check_journey(journey const& j, minutes min_transfer) {
  auto const& legs = j.legs_;
  if (legs.empty()) {
    return journey_violation::kEmpty;
  }
  if (legs.front().from_ != j.origin_) {
    return journey_violation::kWrongOrigin;
  }
  if (legs.back().to_ != j.destination_) {
    return journey_violation::kWrongDestination;
  }
  for (auto i = 1U; i < legs.size(); ++i) {
    if (legs[i - 1].to_ != legs[i].from_) {
      return journey_violation::kDisconnected;
    }
  }
  for (auto i = 1U; i < legs.size(); ++i) {
    if (legs[i].departure_ - legs[i - 1].arrival_ < min_transfer ||
        legs[i].departure_ < legs[i - 1].arrival_) {
      return journey_violation::kTransferTooShort;
    }
  }
  std::set<station_idx> stations{legs.front().from_};
  for (auto const& l : legs) {
    if (!stations.insert(l.to_).second) {
      return journey_violation::kRepeatedStation;
    }
  }
  std::set<std::size_t> instances;
  for (auto const& l : legs) {
    if (!instances.insert(l.instance_).second) {
      return journey_violation::kRepeatedService;
    }
  }
  for (auto const& l : legs) {
    if (l.arrival_ < l.departure_ || l.from_ == l.to_) {
      return journey_violation::kBadLeg;
    }
  }
  return journey_violation::kNone;
}

std::uint32_t n_transfers(journey const& j) {
  return j.legs_.empty() ? 0U : static_cast<std::uint32_t>(j.legs_.size() - 1);
}

minutes total_transfer_time(journey const& j) {
  minutes sum = 0;
  for (auto i = 1U; i < j.legs_.size(); ++i) {
    sum += j.legs_[i].departure_ - j.legs_[i - 1].arrival_;
  }
  return sum;
}

minutes total_travel_time(journey const& j) {
  return j.legs_.empty() ? 0 : j.arrival() - j.departure();
}

bool journey_order(scenario const& s, journey const& a, journey const& b) {
  if (a.departure() != b.departure()) {
    return a.departure() < b.departure();
  }
  if (a.legs_.size() != b.legs_.size()) {
    return a.legs_.size() < b.legs_.size();
  }
  for (auto i = 0U; i != a.legs_.size(); ++i) {
    auto const& x = a.legs_[i];
    auto const& y = b.legs_[i];
    auto const& xid = s.services_[x.service_.get()].id_;
    auto const& yid = s.services_[y.service_.get()].id_;
    if (xid != yid) {
      return xid < yid;
    }
    if (x.board_stop_ != y.board_stop_) {
      return x.board_stop_ < y.board_stop_;
    }
    if (x.alight_stop_ != y.alight_stop_) {
      return x.alight_stop_ < y.alight_stop_;
    }
  }
  return false;
}

std::vector<leg> candidate_legs(scenario const& s, supply_state const& supply,
                                day_idx travel_date) {
  std::vector<leg> out;
  for (auto const i : supply.instances_on(travel_date)) {
    auto const& inst = supply.instance(i);
    auto const& t = s.services_[inst.service_.get()];
    auto const& stops = s.lines_[t.line_].stops_;
    for (auto b = 0U; b != stops.size(); ++b) {
      for (auto a = b + 1U; a < stops.size(); ++a) {
        auto const sellable =
            std::any_of(begin(inst.cells_), end(inst.cells_),
                        [&](seat_cell const& c) {
                          return c.origin_ == stops[b] &&
                                 c.destination_ == stops[a];
                        });
        if (sellable) {
          out.push_back({i, inst.service_, b, a, stops[b], stops[a],
                         t.times_[b], t.times_[a]});
        }
      }
    }
  }
  return out;
}

namespace {

struct search {
  std::vector<leg> const& legs_;
  station_idx destination_;
  minutes min_transfer_;
  std::size_t max_legs_;
  journey current_;
  std::vector<journey> out_;
  std::set<station_idx> visited_;
  std::set<std::size_t> used_;

  void extend(station_idx at, std::optional<minutes> earliest) {
    for (auto const& l : legs_) {
      if (l.from_ != at || visited_.contains(l.to_) ||
          used_.contains(l.instance_) ||
          (earliest.has_value() && l.departure_ < *earliest)) {
        continue;
      }
      current_.legs_.push_back(l);
      if (l.to_ == destination_) {
        out_.push_back(current_);
      } else if (current_.legs_.size() < max_legs_) {
        visited_.insert(l.to_);
        used_.insert(l.instance_);
        extend(l.to_, l.arrival_ + min_transfer_);
        used_.erase(l.instance_);
        visited_.erase(l.to_);
      }
      current_.legs_.pop_back();
    }
  }
};

}  // namespace

std::vector<journey> enumerate_journeys(scenario const& s,
                                        supply_state const& supply,
                                        station_idx origin,
                                        station_idx destination,
                                        day_idx travel_date,
                                        minutes min_transfer,
                                        std::uint32_t max_transfers) {
  if (!s.find_market(origin, destination).has_value()) {
    throw unknown_market{"market is not declared in the scenario"};
  }
  auto const legs = candidate_legs(s, supply, travel_date);
  search srch{legs, destination, min_transfer, max_transfers + 1U, {}, {},
              {origin}, {}};
  srch.current_.origin_ = origin;
  srch.current_.destination_ = destination;
  srch.current_.travel_date_ = travel_date;
  srch.extend(origin, std::nullopt);

  auto out = std::move(srch.out_);
  std::stable_sort(begin(out), end(out),
                   [&](journey const& a, journey const& b) {
                     return journey_order(s, a, b);
                   });
  return out;
}

std::vector<journey> enumerate_journeys(scenario const& s,
                                        supply_state const& supply,
                                        market_idx m, day_idx travel_date,
                                        minutes min_transfer,
                                        std::uint32_t max_transfers) {
  if (m.get() >= s.markets_.size()) {
    throw unknown_market{"no market " + std::to_string(m.get())};
  }
  auto const& spec = s.markets_[m.get()];
  return enumerate_journeys(s, supply, spec.origin_, spec.destination_,
                            travel_date, min_transfer, max_transfers);
}

}  // namespace railpricing
