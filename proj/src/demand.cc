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

#include "railpricing/demand.h"

#include <cmath>
#include <string>

namespace railpricing {

namespace {

minutes uniform_time(time_window const& w, rng& r) {
  if (w.to_ <= w.from_) {
    return w.from_;
  }
  return w.from_ + static_cast<minutes>(
                       r.below(static_cast<std::uint64_t>(w.to_ - w.from_ + 1)));
}

}  // namespace

std::vector<passenger> sample_daily_demand(scenario const& s, day_idx t,
                                           rng& r, std::uint64_t first_id) {
  if (t < 1 || t > s.episode_.horizon_days_) {
    throw out_of_range{"booking day " + std::to_string(t) + " outside [1, " +
                       std::to_string(s.episode_.horizon_days_) + "]"};
  }
  auto const terminal =
      s.episode_.travel_date_mode_ == travel_date_mode::single_terminal_date;

  std::vector<passenger> out;
  auto id = first_id;
  for (auto m = 0U; m != s.markets_.size(); ++m) {
    auto const& spec = s.markets_[m];
    auto const count =
        spec.distribution_ == volume_distribution::constant
            ? static_cast<std::uint64_t>(std::llround(spec.mean_))
            : r.poisson(spec.mean_);
    for (auto i = std::uint64_t{0U}; i != count; ++i) {
      passenger p;
      p.id_ = id++;
      p.market_ = market_idx{m};
      p.type_ = passenger_type_idx{r.categorical(spec.type_mixture_)};
      p.purchase_day_ = t;
      auto const& type = s.passenger_types_[p.type_.get()];
      if (terminal) {
        p.desired_travel_date_ = s.episode_.horizon_days_ + 1;
      } else {
        p.desired_travel_date_ =
            t + static_cast<day_idx>(r.categorical(type.purchase_anticipation_));
      }
      p.preferred_departure_ = uniform_time(type.preferred_departure_, r);
      p.preferred_arrival_ = uniform_time(type.preferred_arrival_, r);
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace railpricing
