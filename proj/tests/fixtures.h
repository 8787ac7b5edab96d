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

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "railpricing/scenario.h"

namespace fixtures {

using json = nlohmann::ordered_json;

struct service_def {
  std::string id_;
  std::string operator_;
  std::vector<std::string> stops_;
  std::vector<std::string> times_;
  // Sold origin-destination pairs; every stop pair when empty.
  std::vector<std::pair<std::string, std::string>> cells_;
  double price_{50.0};
};

struct market_def {
  std::string origin_;
  std::string destination_;
  double mean_{1.0};
};

inline json plain_type(double seat_utility = 10.0, double price = 0.0,
                       double noise = 1.0) {
  return {{"id", "traveller"},
          {"seat_utility", {{"standard", seat_utility}}},
          {"arrival_penalty", {{"linear", 0.0}}},
          {"departure_penalty", {{"linear", 0.0}}},
          {"price_sensitivity", {{"linear", price}}},
          {"travel_time_penalty", {{"linear", 0.0}}},
          {"transfer_time_penalty", {{"linear", 0.0}}},
          {"transfer_count_penalty", 0.0},
          {"noise", {{"distribution", "gumbel"}, {"scale", noise}}},
          {"preferred_departure", {"08:00", "08:00"}},
          {"preferred_arrival", {"09:00", "09:00"}}};
}

struct network {
  std::vector<std::string> stations_;
  std::vector<service_def> services_;
  std::vector<market_def> markets_;
  std::vector<json> types_{plain_type()};
  std::vector<std::vector<double>> mixture_;  // per market, empty = first type
  int horizon_{1};
  int min_transfer_{5};
  int capacity_{100};
  int max_transfers_{2};
  std::string mode_{"single-terminal-date"};

  json to_json() const {
    json j;
    j["schema_version"] = 1;
    j["name"] = "fixture";
    j["stations"] = stations_;
    j["seat_classes"] = {"standard"};
    j["corridors"] = json::array({{{"id", "all"}, {"stations", stations_}}});
    auto lines = json::array();
    std::map<std::string, std::vector<std::string>> by_agent;
    std::vector<std::string> agent_order;
    auto services = json::array();
    for (auto const& s : services_) {
      lines.push_back(
          {{"id", "L" + s.id_}, {"corridor", "all"}, {"stops", s.stops_}});
      if (!by_agent.contains(s.operator_)) {
        agent_order.push_back(s.operator_);
      }
      by_agent[s.operator_].push_back(s.id_);
      auto prices = json::array();
      auto cells = s.cells_;
      if (cells.empty()) {
        for (auto b = 0U; b != s.stops_.size(); ++b) {
          for (auto a = b + 1U; a < s.stops_.size(); ++a) {
            cells.emplace_back(s.stops_[b], s.stops_[a]);
          }
        }
      }
      for (auto const& [o, d] : cells) {
        prices.push_back({{"origin", o},
                          {"destination", d},
                          {"seat", "standard"},
                          {"price", s.price_}});
      }
      services.push_back({{"id", s.id_},
                          {"operator", s.operator_},
                          {"line", "L" + s.id_},
                          {"times", s.times_},
                          {"rolling_stock", "unit"},
                          {"prices", prices}});
    }
    j["lines"] = lines;
    j["rolling_stock"] = json::array(
        {{{"id", "unit"}, {"capacity", {{"standard", capacity_}}}}});
    auto agents = json::array();
    for (auto const& a : agent_order) {
      agents.push_back({{"id", a}, {"services", by_agent[a]}});
    }
    j["agents"] = agents;
    j["services"] = services;
    j["passenger_types"] = types_;
    auto markets = json::array();
    auto total = 0.0;
    for (auto i = 0U; i != markets_.size(); ++i) {
      auto const& m = markets_[i];
      json mix = json::object();
      if (i < mixture_.size()) {
        for (auto k = 0U; k != types_.size(); ++k) {
          mix[types_[k]["id"].get<std::string>()] = mixture_[i][k];
        }
      } else {
        mix[types_.front()["id"].get<std::string>()] = 1.0;
      }
      markets.push_back({{"origin", m.origin_},
                         {"destination", m.destination_},
                         {"volume", {{"distribution", "poisson"}, {"mean", m.mean_}}},
                         {"type_mixture", mix}});
      total += m.mean_;
    }
    j["markets"] = markets;
    j["episode"] = {{"horizon_days", horizon_},
                    {"travel_date_mode", mode_},
                    {"passengers_expected_total", total * horizon_}};
    j["min_transfer_minutes"] = min_transfer_;
    j["max_transfers"] = max_transfers_;
    return j;
  }

  railpricing::scenario build() const {
    return railpricing::load_scenario(to_json().dump());
  }
};

// The A-C market example network: a direct service, a valid connection,
// a connection that ends at the wrong station and one with a zero-minute
// transfer.
inline network example_network() {
  network n;
  n.stations_ = {"A", "B", "C", "D"};
  n.services_ = {
      {"s1", "op1", {"A", "C"}, {"08:00", "09:00"}},
      {"s2", "op2", {"A", "B"}, {"08:00", "08:45"}},
      {"s3", "op3", {"B", "C"}, {"09:00", "09:30"}},
      {"s4", "op2", {"A", "B"}, {"08:00", "08:50"}},
      {"s5", "op3", {"B", "D"}, {"09:00", "09:25"}},
      {"s6", "op2", {"A", "B"}, {"08:00", "08:30"}},
      {"s7", "op3", {"B", "D"}, {"08:50", "09:15"}},
      {"s8", "op1", {"D", "C"}, {"09:15", "09:45"}},
  };
  n.markets_ = {{"A", "C", 1.0}};
  n.min_transfer_ = 5;
  return n;
}

}  // namespace fixtures
