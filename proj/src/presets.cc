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

#include <string>

#include "json.hpp"

#include "railpricing/scenario.h"

namespace railpricing {

using json = nlohmann::ordered_json;

namespace {

json cell(char const* o, char const* d, double price) {
  return {{"origin", o}, {"destination", d}, {"seat", "standard"},
          {"price", price}};
}

json service(char const* id, char const* op, char const* line,
             std::vector<std::string> times, char const* o, char const* d,
             double price) {
  return {{"id", id},
          {"operator", op},
          {"line", line},
          {"times", std::move(times)},
          {"rolling_stock", "unit60"},
          {"prices", json::array({cell(o, d, price)})}};
}

json linear(double c) { return {{"linear", c}}; }

json business_type() {
  return {{"id", "business"},
          {"seat_utility", {{"standard", 20.0}}},
          {"arrival_penalty", linear(0.01)},
          {"departure_penalty", linear(0.01)},
          {"price_sensitivity", linear(0.05)},
          {"travel_time_penalty", linear(0.02)},
          {"transfer_time_penalty", linear(0.05)},
          {"transfer_count_penalty", 1.0},
          {"noise", {{"distribution", "gumbel"}, {"scale", 1.0}}},
          {"purchase_anticipation", {0.05, 0.1, 0.15, 0.2, 0.25, 0.25}},
          {"preferred_departure", {"07:00", "09:00"}},
          {"preferred_arrival", {"09:00", "11:00"}}};
}

json student_type() {
  return {{"id", "student"},
          {"seat_utility", {{"standard", 16.0}}},
          {"arrival_penalty", linear(0.01)},
          {"departure_penalty", linear(0.01)},
          {"price_sensitivity", linear(0.25)},
          {"travel_time_penalty", linear(0.01)},
          {"transfer_time_penalty", linear(0.02)},
          {"transfer_count_penalty", 0.5},
          {"noise", {{"distribution", "gumbel"}, {"scale", 2.0}}},
          {"purchase_anticipation", {0.5, 0.3, 0.2}},
          {"preferred_departure", {"07:00", "09:00"}},
          {"preferred_arrival", {"09:00", "11:00"}}};
}

json network(std::string const& name) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name;
  j["calibration"] = "default";
  j["stations"] = {"A", "B", "C", "D"};
  j["seat_classes"] = {"standard"};
  j["corridors"] = json::array(
      {{{"id", "ABCD"}, {"stations", {"A", "B", "C", "D"}}}});
  j["lines"] = json::array(
      {{{"id", "A-C"}, {"corridor", "ABCD"}, {"stops", {"A", "C"}}},
       {{"id", "A-B"}, {"corridor", "ABCD"}, {"stops", {"A", "B"}}},
       {{"id", "B-C"}, {"corridor", "ABCD"}, {"stops", {"B", "C"}}},
       {{"id", "C-D"}, {"corridor", "ABCD"}, {"stops", {"C", "D"}}}});
  j["rolling_stock"] = json::array(
      {{{"id", "unit60"}, {"capacity", {{"standard", 60}}}}});
  j["agents"] = json::array(
      {{{"id", "agent_1"}, {"services", {"s1"}}},
       {{"id", "agent_2"}, {"services", {"s2", "s4"}}},
       {{"id", "agent_3"}, {"services", {"s3", "s5"}}}});
  j["services"] = json::array(
      {service("s1", "agent_1", "A-C", {"08:00", "09:00"}, "A", "C", 60.0),
       service("s2", "agent_2", "A-B", {"08:00", "08:45"}, "A", "B", 30.0),
       service("s3", "agent_3", "B-C", {"09:00", "09:30"}, "B", "C", 30.0),
       service("s4", "agent_2", "C-D", {"09:45", "10:30"}, "C", "D", 35.0),
       service("s5", "agent_3", "C-D", {"10:00", "10:45"}, "C", "D", 35.0)});
  j["min_transfer_minutes"] = 5;
  j["max_transfers"] = 2;
  j["time_slot_minutes"] = 60;
  j["price_step_percent"] = 25.0;
  return j;
}

json markets(double scale, json const& mixture) {
  auto const m = [&](char const* o, char const* d, double mean) {
    return json{{"origin", o},
                {"destination", d},
                {"volume", {{"distribution", "poisson"}, {"mean", mean * scale}}},
                {"type_mixture", mixture}};
  };
  return json::array({m("A", "C", 6.0), m("A", "D", 6.0), m("A", "B", 4.0),
                      m("B", "C", 3.0), m("C", "D", 3.0)});
}

json business() {
  auto j = network("business");
  j["passenger_types"] = json::array({business_type()});
  j["markets"] = markets(1.0, {{"business", 1.0}});
  j["episode"] = {{"horizon_days", 5},
                  {"travel_date_mode", "single-terminal-date"},
                  {"passengers_expected_total", 110.0}};
  return j;
}

json business_student() {
  auto j = network("business_student");
  j["passenger_types"] = json::array({business_type(), student_type()});
  j["markets"] = markets(10.0 / 7.0, {{"business", 0.6}, {"student", 0.4}});
  j["episode"] = {{"horizon_days", 7},
                  {"travel_date_mode", "single-terminal-date"},
                  {"passengers_expected_total", 220.0}};
  return j;
}

}  // namespace

scenario preset(std::string_view name) {
  if (name == "business") {
    return load_scenario(business().dump());
  }
  if (name == "business_student") {
    return load_scenario(business_student().dump());
  }
  throw unknown_preset{"unknown preset \"" + std::string{name} +
                       "\" (expected business or business_student)"};
}

}  // namespace railpricing
