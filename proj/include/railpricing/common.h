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

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace railpricing {

// Index into one of the scenario's id tables. The tag keeps station, agent,
// service and market indices from being mixed up.
template <typename Tag>
struct strong_index {
  using value_type = std::uint32_t;

  constexpr strong_index() = default;
  constexpr explicit strong_index(std::size_t v)
      : v_{static_cast<value_type>(v)} {}

  constexpr std::size_t get() const { return v_; }
  constexpr auto operator<=>(strong_index const&) const = default;

private:
  value_type v_{0U};
};

using station_idx = strong_index<struct station_tag>;
using agent_idx = strong_index<struct agent_tag>;
using service_idx = strong_index<struct service_tag>;
using seat_class_idx = strong_index<struct seat_class_tag>;
using market_idx = strong_index<struct market_tag>;
using passenger_type_idx = strong_index<struct passenger_type_tag>;

// Minutes since midnight of the travel date.
using minutes = std::int32_t;

// Day index within an episode. Booking days are 1..T.
using day_idx = std::int32_t;

// Parses "HH:MM" (hours may exceed 23 for services running past midnight).
minutes parse_clock(std::string_view s);
std::string format_clock(minutes m);

// Exact currency amount in hundredths.
class money {
public:
  constexpr money() = default;
  static constexpr money from_cents(std::int64_t c) {
    money m;
    m.cents_ = c;
    return m;
  }
  // Rounds half-to-even to the nearest cent; throws if `units` has a
  // non-negligible third fractional digit.
  static money from_units(double units);

  constexpr std::int64_t cents() const { return cents_; }
  double units() const { return static_cast<double>(cents_) / 100.0; }
  std::string str() const;

  constexpr money& operator+=(money o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr money& operator-=(money o) {
    cents_ -= o.cents_;
    return *this;
  }
  friend constexpr money operator+(money a, money b) { return a += b; }
  friend constexpr money operator-(money a, money b) { return a -= b; }
  constexpr auto operator<=>(money const&) const = default;

private:
  std::int64_t cents_{0};
};

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct syntax_error : error {
  using error::error;
};

struct validation_error : error {
  validation_error(std::string path, std::string const& what)
      : error{path + ": " + what}, path_{std::move(path)} {}
  std::string const& path() const { return path_; }

private:
  std::string path_;
};

struct unknown_preset : error {
  using error::error;
};
struct not_owner : error {
  using error::error;
};
struct sold_out : error {
  using error::error;
};
struct unknown_cell : error {
  using error::error;
};
struct out_of_range : error {
  using error::error;
};
struct unknown_market : error {
  using error::error;
};
struct unknown_agent : error {
  using error::error;
};
struct malformed_action : error {
  using error::error;
};
struct already_terminal : error {
  using error::error;
};
struct incompatible_space : error {
  using error::error;
};
struct degenerate_input : error {
  using error::error;
};
struct malformed_weights : error {
  using error::error;
};
struct incomplete_episode : error {
  using error::error;
};
struct empty_trace : error {
  using error::error;
};

}  // namespace railpricing

template <typename Tag>
struct std::hash<railpricing::strong_index<Tag>> {
  std::size_t operator()(railpricing::strong_index<Tag> i) const noexcept {
    return std::hash<std::size_t>{}(i.get());
  }
};
