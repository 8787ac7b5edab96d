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

#include "railpricing/supply.h"

#include <cmath>
#include <limits>
#include <string>

#include "boost/multiprecision/cpp_int.hpp"

namespace railpricing {

namespace {

using boost::multiprecision::cpp_int;

// x == mantissa * 2^exponent exactly.
struct binary_value {
  cpp_int mantissa_;
  int exponent_{0};
};

binary_value decompose(double x) {
  auto exp = 0;
  auto const frac = std::frexp(x, &exp);
  auto const m = static_cast<std::int64_t>(std::ldexp(frac, 53));
  return {cpp_int{m}, exp - 53};
}

}  // namespace

money apply_price_change(money p, double alpha, double beta_percent) {
  if (!std::isfinite(alpha) || !std::isfinite(beta_percent)) {
    throw out_of_range{"non-finite price action"};
  }
  if (p.cents() <= 0) {
    return money{};
  }
  auto const a = decompose(alpha);
  auto const b = decompose(beta_percent);

  // new = cents * (100 + a*b) / 100, a*b = ma*mb * 2^e.
  auto const prod = a.mantissa_ * b.mantissa_;
  auto const e = a.exponent_ + b.exponent_;
  cpp_int num;
  cpp_int den = 100;
  if (e >= 0) {
    num = cpp_int{p.cents()} * (100 + (prod << e));
  } else {
    auto const scale = cpp_int{1} << -e;
    num = cpp_int{p.cents()} * (100 * scale + prod);
    den *= scale;
  }
  if (num <= 0) {
    return money{};
  }

  cpp_int q = num / den;
  cpp_int const r = num - q * den;
  auto const twice = 2 * r;
  if (twice > den || (twice == den && (q & 1) != 0)) {
    ++q;
  }
  if (q >= kPriceCeilingCents) {
    return money::from_cents(kPriceCeilingCents);
  }
  return money::from_cents(static_cast<std::int64_t>(q));
}

double discretize_action(int level) {
  if (level < 0 || level >= kDiscreteLevels) {
    throw out_of_range{"discrete action level " + std::to_string(level) +
                       " outside [0, 10]"};
  }
  return static_cast<double>(level - 5) / 5.0;
}

std::optional<std::size_t> service_instance::find_cell(
    station_idx origin, station_idx destination, seat_class_idx seat) const {
  for (auto i = 0U; i != cells_.size(); ++i) {
    auto const& c = cells_[i];
    if (c.origin_ == origin && c.destination_ == destination &&
        c.seat_ == seat) {
      return i;
    }
  }
  return std::nullopt;
}

supply_state::supply_state(scenario const& s)
    : first_date_{s.first_travel_date()} {
  auto const last = s.last_travel_date();
  by_date_.resize(static_cast<std::size_t>(last - first_date_ + 1));
  for (auto date = first_date_; date <= last; ++date) {
    for (auto k = 0U; k != s.services_.size(); ++k) {
      auto const& t = s.services_[k];
      auto const& stock = s.rolling_stock_[t.rolling_stock_];
      service_instance inst;
      inst.service_ = service_idx{k};
      inst.operator_ = t.operator_;
      inst.travel_date_ = date;
      for (auto const& c : t.prices_) {
        inst.cells_.push_back({c.origin_, c.destination_, c.seat_, c.price_,
                               stock.capacity_[c.seat_.get()], 0U});
      }
      by_date_[static_cast<std::size_t>(date - first_date_)].push_back(
          instances_.size());
      instances_.push_back(std::move(inst));
    }
  }
}

std::span<std::size_t const> supply_state::instances_on(
    day_idx travel_date) const {
  if (travel_date < first_date_ ||
      travel_date - first_date_ >= static_cast<day_idx>(by_date_.size())) {
    return {};
  }
  return by_date_[static_cast<std::size_t>(travel_date - first_date_)];
}

void supply_state::apply_price_action(agent_idx agent,
                                      std::span<cell_adjustment const> action,
                                      double beta_percent) {
  if (!(beta_percent > 0.0) || !std::isfinite(beta_percent)) {
    throw out_of_range{"price step must be > 0"};
  }
  for (auto const& a : action) {
    auto const& inst = instances_.at(a.instance_);
    if (inst.operator_ != agent) {
      throw not_owner{"agent " + std::to_string(agent.get()) +
                      " does not operate instance " +
                      std::to_string(a.instance_)};
    }
    if (a.cell_ >= inst.cells_.size()) {
      throw unknown_cell{"no cell " + std::to_string(a.cell_)};
    }
    if (!(std::fabs(a.alpha_) <= 1.0)) {
      throw out_of_range{"alpha must be in [-1, 1]"};
    }
  }
  for (auto const& a : action) {
    auto& c = instances_[a.instance_].cells_[a.cell_];
    c.price_ = apply_price_change(c.price_, a.alpha_, beta_percent);
  }
}

money supply_state::sell_ticket(std::size_t instance, std::size_t cell) {
  auto& inst = instances_.at(instance);
  auto& c = inst.cells_.at(cell);
  if (c.sold_ >= c.capacity_) {
    throw sold_out{"no seats left on instance " + std::to_string(instance)};
  }
  ++c.sold_;
  inst.revenue_ += c.price_;
  ledger_.push_back({instance, cell, c.price_});
  return c.price_;
}

money supply_state::sell_ticket(std::size_t instance, station_idx origin,
                                station_idx destination, seat_class_idx seat) {
  return sell_ticket(instance,
                     cell_or_throw(instance, origin, destination, seat));
}

bool supply_state::tickets_available(std::size_t instance,
                                     std::size_t cell) const {
  auto const& c = instances_.at(instance).cells_.at(cell);
  return c.sold_ < c.capacity_;
}

bool supply_state::tickets_available(std::size_t instance, station_idx origin,
                                     station_idx destination,
                                     seat_class_idx seat) const {
  return tickets_available(instance,
                           cell_or_throw(instance, origin, destination, seat));
}

std::size_t supply_state::cell_or_throw(std::size_t instance,
                                        station_idx origin,
                                        station_idx destination,
                                        seat_class_idx seat) const {
  if (instance >= instances_.size()) {
    throw unknown_cell{"no instance " + std::to_string(instance)};
  }
  auto const c = instances_[instance].find_cell(origin, destination, seat);
  if (!c.has_value()) {
    throw unknown_cell{"instance " + std::to_string(instance) +
                       " has no such (origin, destination, seat) cell"};
  }
  return *c;
}

money supply_state::revenue_of(agent_idx agent) const {
  money sum;
  for (auto const& inst : instances_) {
    if (inst.operator_ == agent) {
      sum += inst.revenue_;
    }
  }
  return sum;
}

money supply_state::total_revenue() const {
  money sum;
  for (auto const& inst : instances_) {
    sum += inst.revenue_;
  }
  return sum;
}

}  // namespace railpricing
