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

#include "railpricing/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace railpricing {

using json = nlohmann::ordered_json;

double penalty_curve::operator()(double x) const {
  if (points_.empty()) {
    return slope_ * x;
  }
  if (x <= points_.front().first) {
    return points_.front().second;
  }
  if (x >= points_.back().first) {
    return points_.back().second;
  }
  auto const it = std::upper_bound(
      begin(points_), end(points_), x,
      [](double v, std::pair<double, double> const& p) { return v < p.first; });
  auto const& [x1, y1] = *it;
  auto const& [x0, y0] = *std::prev(it);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double noise_spec::draw(rng& r) const {
  switch (distribution_) {
    case noise_distribution::gumbel: return r.gumbel(scale_);
    case noise_distribution::normal: return r.normal(scale_);
    case noise_distribution::none: return 0.0;
  }
  return 0.0;
}

std::optional<station_idx> scenario::find_station(std::string_view id) const {
  auto const it = std::find(begin(stations_), end(stations_), id);
  if (it == end(stations_)) {
    return std::nullopt;
  }
  return station_idx{static_cast<std::size_t>(it - begin(stations_))};
}

std::optional<agent_idx> scenario::find_agent(std::string_view id) const {
  for (auto i = 0U; i != agents_.size(); ++i) {
    if (agents_[i].id_ == id) {
      return agent_idx{i};
    }
  }
  return std::nullopt;
}

std::optional<market_idx> scenario::find_market(station_idx from,
                                                station_idx to) const {
  for (auto i = 0U; i != markets_.size(); ++i) {
    if (markets_[i].origin_ == from && markets_[i].destination_ == to) {
      return market_idx{i};
    }
  }
  return std::nullopt;
}

day_idx scenario::first_travel_date() const {
  return episode_.travel_date_mode_ == travel_date_mode::single_terminal_date
             ? episode_.horizon_days_ + 1
             : 1;
}

day_idx scenario::last_travel_date() const {
  if (episode_.travel_date_mode_ == travel_date_mode::single_terminal_date) {
    return episode_.horizon_days_ + 1;
  }
  auto max_ahead = std::size_t{1U};
  for (auto const& t : passenger_types_) {
    max_ahead = std::max(max_ahead, t.purchase_anticipation_.size());
  }
  return episode_.horizon_days_ + static_cast<day_idx>(max_ahead) - 1;
}

namespace {

// JSON reader that remembers where it is, so validation errors can name the
// offending key.
struct node {
  json const& j_;
  std::string path_;

  node operator[](std::string const& key) const {
    if (!j_.contains(key)) {
      throw validation_error{path_, "missing key \"" + key + "\""};
    }
    return {j_.at(key), path_ + "." + key};
  }
  node at(std::size_t i) const {
    return {j_.at(i), path_ + "[" + std::to_string(i) + "]"};
  }
  bool has(std::string const& key) const { return j_.contains(key); }
  std::size_t size() const { return j_.size(); }

  [[noreturn]] void fail(std::string const& what) const {
    throw validation_error{path_, what};
  }

  void keys(std::initializer_list<char const*> allowed) const {
    if (!j_.is_object()) {
      fail("expected an object");
    }
    for (auto const& [k, v] : j_.items()) {
      if (std::none_of(begin(allowed), end(allowed),
                       [&](char const* a) { return k == a; })) {
        throw validation_error{path_ + "." + k, "unknown key"};
      }
    }
  }
  void object() const {
    if (!j_.is_object()) {
      fail("expected an object");
    }
  }
  void array() const {
    if (!j_.is_array()) {
      fail("expected an array");
    }
  }
  std::string str() const {
    if (!j_.is_string()) {
      fail("expected a string");
    }
    return j_.get<std::string>();
  }
  double num() const {
    if (!j_.is_number()) {
      fail("expected a number");
    }
    auto const v = j_.get<double>();
    if (!std::isfinite(v)) {
      fail("expected a finite number");
    }
    return v;
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) {
      fail("expected an integer");
    }
    return j_.get<std::int64_t>();
  }
  std::vector<std::string> strings() const {
    array();
    std::vector<std::string> v;
    for (auto i = 0U; i != size(); ++i) {
      v.emplace_back(at(i).str());
    }
    return v;
  }
};

std::size_t index_of(std::vector<std::string> const& ids, node const& n,
                     char const* what) {
  auto const id = n.str();
  auto const it = std::find(begin(ids), end(ids), id);
  if (it == end(ids)) {
    n.fail(std::string{"unknown "} + what + " \"" + id + "\"");
  }
  return static_cast<std::size_t>(it - begin(ids));
}

template <typename Idx>
Idx lookup(std::vector<std::string> const& ids, node const& n,
           char const* what) {
  return Idx{index_of(ids, n, what)};
}

template <typename T>
std::vector<std::string> ids_of(std::vector<T> const& v) {
  std::vector<std::string> ids;
  for (auto const& x : v) {
    ids.emplace_back(x.id_);
  }
  return ids;
}

std::vector<std::string> ids_in(node const& arr) {
  arr.array();
  std::vector<std::string> ids;
  for (auto i = 0U; i != arr.size(); ++i) {
    auto const e = arr.at(i);
    e.object();
    ids.emplace_back(e["id"].str());
  }
  return ids;
}

penalty_curve read_curve(node const& n) {
  n.keys({"linear", "piecewise"});
  if (n.has("linear") == n.has("piecewise")) {
    n.fail("expected exactly one of \"linear\" or \"piecewise\"");
  }
  if (n.has("linear")) {
    return penalty_curve::linear(n["linear"].num());
  }
  auto const pts = n["piecewise"];
  pts.array();
  penalty_curve c;
  for (auto i = 0U; i != pts.size(); ++i) {
    auto const p = pts.at(i);
    p.array();
    if (p.size() != 2U) {
      p.fail("expected an [x, y] pair");
    }
    c.points_.emplace_back(p.at(0).num(), p.at(1).num());
  }
  return c;
}

time_window read_window(node const& n) {
  n.array();
  if (n.size() != 2U) {
    n.fail("expected [from, to] clock times");
  }
  auto const clock = [](node const& c) {
    try {
      return parse_clock(c.str());
    } catch (syntax_error const& e) {
      c.fail(e.what());
    }
  };
  return {clock(n.at(0)), clock(n.at(1))};
}

scenario from_json(json const& doc) {
  node const root{doc, "$"};
  root.keys({"schema_version", "name", "calibration", "stations",
             "seat_classes", "corridors", "lines", "rolling_stock", "agents",
             "services", "passenger_types", "markets", "episode",
             "min_transfer_minutes", "max_transfers", "time_slot_minutes",
             "price_step_percent"});
  auto const version = root["schema_version"];
  if (version.integer() != kSchemaVersion) {
    version.fail("unsupported schema_version " +
                 std::to_string(version.integer()));
  }

  scenario s;
  s.name_ = root["name"].str();
  if (root.has("calibration")) {
    s.calibration_ = root["calibration"].str();
  }
  s.stations_ = root["stations"].strings();
  s.seat_classes_ = root["seat_classes"].strings();

  auto const corridor_ids = ids_in(root["corridors"]);
  auto const line_ids = ids_in(root["lines"]);
  auto const stock_ids = ids_in(root["rolling_stock"]);
  auto const agent_ids = ids_in(root["agents"]);
  auto const service_ids = ids_in(root["services"]);
  auto const type_ids = ids_in(root["passenger_types"]);

  auto const stations_of = [&](node const& n) {
    n.array();
    std::vector<station_idx> v;
    for (auto i = 0U; i != n.size(); ++i) {
      v.emplace_back(lookup<station_idx>(s.stations_, n.at(i), "station"));
    }
    return v;
  };

  for (auto i = 0U; i != corridor_ids.size(); ++i) {
    auto const n = root["corridors"].at(i);
    n.keys({"id", "stations"});
    s.corridors_.push_back({corridor_ids[i], stations_of(n["stations"])});
  }

  for (auto i = 0U; i != line_ids.size(); ++i) {
    auto const n = root["lines"].at(i);
    n.keys({"id", "corridor", "stops"});
    s.lines_.push_back(
        {line_ids[i], index_of(corridor_ids, n["corridor"], "corridor"),
         stations_of(n["stops"])});
  }

  for (auto i = 0U; i != stock_ids.size(); ++i) {
    auto const n = root["rolling_stock"].at(i);
    n.keys({"id", "capacity"});
    auto const cap = n["capacity"];
    cap.object();
    rolling_stock rs{stock_ids[i], {}};
    rs.capacity_.resize(s.seat_classes_.size(), 0U);
    for (auto const& [k, v] : cap.j_.items()) {
      node const c{v, cap.path_ + "." + k};
      auto const seat =
          lookup<seat_class_idx>(s.seat_classes_, {json(k), c.path_}, "seat");
      auto const x = c.integer();
      if (x < 0) {
        c.fail("capacity must be >= 0");
      }
      rs.capacity_[seat.get()] = static_cast<std::uint32_t>(x);
    }
    s.rolling_stock_.push_back(std::move(rs));
  }

  for (auto i = 0U; i != agent_ids.size(); ++i) {
    auto const n = root["agents"].at(i);
    n.keys({"id", "services"});
    auto const svc = n["services"];
    svc.array();
    agent_spec a{agent_ids[i], {}};
    for (auto k = 0U; k != svc.size(); ++k) {
      a.services_.push_back(
          lookup<service_idx>(service_ids, svc.at(k), "service"));
    }
    s.agents_.push_back(std::move(a));
  }

  for (auto i = 0U; i != service_ids.size(); ++i) {
    auto const n = root["services"].at(i);
    n.keys({"id", "operator", "line", "times", "rolling_stock", "prices"});
    service_template t;
    t.id_ = service_ids[i];
    t.operator_ = lookup<agent_idx>(agent_ids, n["operator"], "agent");
    t.line_ = index_of(line_ids, n["line"], "line");
    auto const times = n["times"];
    times.array();
    for (auto k = 0U; k != times.size(); ++k) {
      try {
        t.times_.push_back(parse_clock(times.at(k).str()));
      } catch (syntax_error const& e) {
        times.at(k).fail(e.what());
      }
    }
    t.rolling_stock_ = index_of(stock_ids, n["rolling_stock"], "rolling stock");
    auto const prices = n["prices"];
    prices.array();
    for (auto k = 0U; k != prices.size(); ++k) {
      auto const p = prices.at(k);
      p.keys({"origin", "destination", "seat", "price"});
      price_cell c;
      c.origin_ = lookup<station_idx>(s.stations_, p["origin"], "station");
      c.destination_ =
          lookup<station_idx>(s.stations_, p["destination"], "station");
      c.seat_ = lookup<seat_class_idx>(s.seat_classes_, p["seat"], "seat");
      try {
        c.price_ = money::from_units(p["price"].num());
      } catch (out_of_range const& e) {
        p["price"].fail(e.what());
      }
      t.prices_.push_back(c);
    }
    s.services_.push_back(std::move(t));
  }

  for (auto i = 0U; i != type_ids.size(); ++i) {
    auto const n = root["passenger_types"].at(i);
    n.keys({"id", "tsp_affinity", "seat_utility", "arrival_penalty",
            "departure_penalty", "price_sensitivity", "travel_time_penalty",
            "transfer_time_penalty", "transfer_count_penalty", "noise",
            "purchase_anticipation", "preferred_departure",
            "preferred_arrival"});
    passenger_type t;
    t.id_ = type_ids[i];
    t.tsp_affinity_.assign(agent_ids.size(), 0.0);
    t.seat_utility_.assign(s.seat_classes_.size(), 0.0);
    if (n.has("tsp_affinity")) {
      auto const m = n["tsp_affinity"];
      m.object();
      for (auto const& [k, v] : m.j_.items()) {
        node const x{v, m.path_ + "." + k};
        auto const a = lookup<agent_idx>(agent_ids, {json(k), x.path_}, "agent");
        t.tsp_affinity_[a.get()] = x.num();
      }
    }
    if (n.has("seat_utility")) {
      auto const m = n["seat_utility"];
      m.object();
      for (auto const& [k, v] : m.j_.items()) {
        node const x{v, m.path_ + "." + k};
        auto const c =
            lookup<seat_class_idx>(s.seat_classes_, {json(k), x.path_}, "seat");
        t.seat_utility_[c.get()] = x.num();
      }
    }
    t.arrival_penalty_ = read_curve(n["arrival_penalty"]);
    t.departure_penalty_ = read_curve(n["departure_penalty"]);
    t.price_sensitivity_ = read_curve(n["price_sensitivity"]);
    t.travel_time_penalty_ = read_curve(n["travel_time_penalty"]);
    t.transfer_time_penalty_ = read_curve(n["transfer_time_penalty"]);
    t.transfer_count_penalty_ = n["transfer_count_penalty"].num();

    auto const noise = n["noise"];
    noise.keys({"distribution", "scale"});
    auto const dist = noise["distribution"].str();
    if (dist == "gumbel") {
      t.noise_.distribution_ = noise_distribution::gumbel;
    } else if (dist == "normal") {
      t.noise_.distribution_ = noise_distribution::normal;
    } else if (dist == "none") {
      t.noise_.distribution_ = noise_distribution::none;
    } else {
      noise["distribution"].fail("unknown noise distribution \"" + dist +
                                 "\"");
    }
    t.noise_.scale_ = noise.has("scale") ? noise["scale"].num() : 0.0;

    if (n.has("purchase_anticipation")) {
      auto const pa = n["purchase_anticipation"];
      pa.array();
      t.purchase_anticipation_.clear();
      for (auto k = 0U; k != pa.size(); ++k) {
        t.purchase_anticipation_.push_back(pa.at(k).num());
      }
    }
    t.preferred_departure_ = read_window(n["preferred_departure"]);
    t.preferred_arrival_ = read_window(n["preferred_arrival"]);
    s.passenger_types_.push_back(std::move(t));
  }

  auto const markets = root["markets"];
  markets.array();
  for (auto i = 0U; i != markets.size(); ++i) {
    auto const n = markets.at(i);
    n.keys({"origin", "destination", "volume", "type_mixture"});
    market_demand m;
    m.origin_ = lookup<station_idx>(s.stations_, n["origin"], "station");
    m.destination_ =
        lookup<station_idx>(s.stations_, n["destination"], "station");
    auto const vol = n["volume"];
    vol.keys({"distribution", "mean"});
    auto const dist = vol["distribution"].str();
    if (dist == "poisson") {
      m.distribution_ = volume_distribution::poisson;
    } else if (dist == "constant") {
      m.distribution_ = volume_distribution::constant;
    } else {
      vol["distribution"].fail("unknown volume distribution \"" + dist + "\"");
    }
    m.mean_ = vol["mean"].num();
    m.type_mixture_.assign(type_ids.size(), 0.0);
    auto const mix = n["type_mixture"];
    mix.object();
    for (auto const& [k, v] : mix.j_.items()) {
      node const x{v, mix.path_ + "." + k};
      auto const t =
          lookup<passenger_type_idx>(type_ids, {json(k), x.path_}, "type");
      m.type_mixture_[t.get()] = x.num();
    }
    s.markets_.push_back(std::move(m));
  }

  auto const ep = root["episode"];
  ep.keys({"horizon_days", "travel_date_mode", "passengers_expected_total"});
  auto const horizon = ep["horizon_days"].integer();
  if (horizon < 1 || horizon > 100000) {
    ep["horizon_days"].fail("horizon_days must be >= 1");
  }
  s.episode_.horizon_days_ = static_cast<int>(horizon);
  auto const mode = ep["travel_date_mode"].str();
  if (mode == "single-terminal-date") {
    s.episode_.travel_date_mode_ = travel_date_mode::single_terminal_date;
  } else if (mode == "per-passenger-date") {
    s.episode_.travel_date_mode_ = travel_date_mode::per_passenger_date;
  } else {
    ep["travel_date_mode"].fail("unknown travel_date_mode \"" + mode + "\"");
  }
  s.episode_.passengers_expected_total_ =
      ep["passengers_expected_total"].num();

  auto const bounded_int = [](node const& n, std::int64_t lo,
                              std::int64_t hi, char const* what) {
    auto const v = n.integer();
    if (v < lo || v > hi) {
      n.fail(what);
    }
    return v;
  };
  s.min_transfer_minutes_ = static_cast<minutes>(bounded_int(
      root["min_transfer_minutes"], 0, 24 * 60, "must be >= 0"));
  if (root.has("max_transfers")) {
    s.max_transfers_ = static_cast<std::uint32_t>(
        bounded_int(root["max_transfers"], 0, 16, "must be in [0, 16]"));
  }
  if (root.has("time_slot_minutes")) {
    s.time_slot_minutes_ = static_cast<minutes>(bounded_int(
        root["time_slot_minutes"], 1, 48 * 60, "must be positive"));
  }
  if (root.has("price_step_percent")) {
    s.price_step_percent_ = root["price_step_percent"].num();
  }
  return s;
}

json curve_json(penalty_curve const& c) {
  if (c.is_linear()) {
    return {{"linear", c.slope_}};
  }
  auto pts = json::array();
  for (auto const& [x, y] : c.points_) {
    pts.push_back({x, y});
  }
  return {{"piecewise", pts}};
}

json to_json(scenario const& s) {
  auto const station = [&](station_idx i) { return s.stations_[i.get()]; };
  auto const stations = [&](std::vector<station_idx> const& v) {
    auto a = json::array();
    for (auto const x : v) {
      a.push_back(station(x));
    }
    return a;
  };

  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = s.name_;
  j["calibration"] = s.calibration_;
  j["stations"] = s.stations_;
  j["seat_classes"] = s.seat_classes_;

  j["corridors"] = json::array();
  for (auto const& c : s.corridors_) {
    j["corridors"].push_back({{"id", c.id_}, {"stations", stations(c.stations_)}});
  }
  j["lines"] = json::array();
  for (auto const& l : s.lines_) {
    j["lines"].push_back({{"id", l.id_},
                          {"corridor", s.corridors_[l.corridor_].id_},
                          {"stops", stations(l.stops_)}});
  }
  j["rolling_stock"] = json::array();
  for (auto const& rs : s.rolling_stock_) {
    json cap = json::object();
    for (auto c = 0U; c != rs.capacity_.size(); ++c) {
      cap[s.seat_classes_[c]] = rs.capacity_[c];
    }
    j["rolling_stock"].push_back({{"id", rs.id_}, {"capacity", cap}});
  }
  j["agents"] = json::array();
  for (auto const& a : s.agents_) {
    auto svc = json::array();
    for (auto const x : a.services_) {
      svc.push_back(s.services_[x.get()].id_);
    }
    j["agents"].push_back({{"id", a.id_}, {"services", svc}});
  }
  j["services"] = json::array();
  for (auto const& t : s.services_) {
    auto times = json::array();
    for (auto const m : t.times_) {
      times.push_back(format_clock(m));
    }
    auto prices = json::array();
    for (auto const& c : t.prices_) {
      prices.push_back({{"origin", station(c.origin_)},
                        {"destination", station(c.destination_)},
                        {"seat", s.seat_classes_[c.seat_.get()]},
                        {"price", c.price_.units()}});
    }
    j["services"].push_back(
        {{"id", t.id_},
         {"operator", s.agents_[t.operator_.get()].id_},
         {"line", s.lines_[t.line_].id_},
         {"times", times},
         {"rolling_stock", s.rolling_stock_[t.rolling_stock_].id_},
         {"prices", prices}});
  }
  j["passenger_types"] = json::array();
  for (auto const& t : s.passenger_types_) {
    json tsp = json::object();
    for (auto a = 0U; a != t.tsp_affinity_.size(); ++a) {
      tsp[s.agents_[a].id_] = t.tsp_affinity_[a];
    }
    json seat = json::object();
    for (auto c = 0U; c != t.seat_utility_.size(); ++c) {
      seat[s.seat_classes_[c]] = t.seat_utility_[c];
    }
    auto const dist = t.noise_.distribution_ == noise_distribution::gumbel
                          ? "gumbel"
                      : t.noise_.distribution_ == noise_distribution::normal
                          ? "normal"
                          : "none";
    j["passenger_types"].push_back(
        {{"id", t.id_},
         {"tsp_affinity", tsp},
         {"seat_utility", seat},
         {"arrival_penalty", curve_json(t.arrival_penalty_)},
         {"departure_penalty", curve_json(t.departure_penalty_)},
         {"price_sensitivity", curve_json(t.price_sensitivity_)},
         {"travel_time_penalty", curve_json(t.travel_time_penalty_)},
         {"transfer_time_penalty", curve_json(t.transfer_time_penalty_)},
         {"transfer_count_penalty", t.transfer_count_penalty_},
         {"noise", {{"distribution", dist}, {"scale", t.noise_.scale_}}},
         {"purchase_anticipation", t.purchase_anticipation_},
         {"preferred_departure",
          {format_clock(t.preferred_departure_.from_),
           format_clock(t.preferred_departure_.to_)}},
         {"preferred_arrival",
          {format_clock(t.preferred_arrival_.from_),
           format_clock(t.preferred_arrival_.to_)}}});
  }
  j["markets"] = json::array();
  for (auto const& m : s.markets_) {
    json mix = json::object();
    for (auto k = 0U; k != m.type_mixture_.size(); ++k) {
      if (m.type_mixture_[k] != 0.0) {
        mix[s.passenger_types_[k].id_] = m.type_mixture_[k];
      }
    }
    j["markets"].push_back(
        {{"origin", station(m.origin_)},
         {"destination", station(m.destination_)},
         {"volume",
          {{"distribution", m.distribution_ == volume_distribution::poisson
                                ? "poisson"
                                : "constant"},
           {"mean", m.mean_}}},
         {"type_mixture", mix}});
  }
  j["episode"] = {
      {"horizon_days", s.episode_.horizon_days_},
      {"travel_date_mode",
       s.episode_.travel_date_mode_ == travel_date_mode::single_terminal_date
           ? "single-terminal-date"
           : "per-passenger-date"},
      {"passengers_expected_total", s.episode_.passengers_expected_total_}};
  j["min_transfer_minutes"] = s.min_transfer_minutes_;
  j["max_transfers"] = s.max_transfers_;
  j["time_slot_minutes"] = s.time_slot_minutes_;
  j["price_step_percent"] = s.price_step_percent_;
  return j;
}

void check_curve(penalty_curve const& c, std::string const& path) {
  if (c.is_linear()) {
    if (c.slope_ < 0.0) {
      throw validation_error{path, "linear penalty slope must be >= 0"};
    }
    return;
  }
  for (auto i = 0U; i != c.points_.size(); ++i) {
    if (c.points_[i].second < 0.0) {
      throw validation_error{path, "penalty values must be >= 0"};
    }
    if (i != 0U && !(c.points_[i].first > c.points_[i - 1].first)) {
      throw validation_error{path, "breakpoints must be strictly increasing"};
    }
  }
}

}  // namespace

void validate(scenario const& s) {
  auto const unique = [](std::vector<std::string> const& ids,
                         std::string const& path) {
    std::set<std::string> seen;
    for (auto const& id : ids) {
      if (!seen.insert(id).second) {
        throw validation_error{path, "duplicate id \"" + id + "\""};
      }
    }
  };
  unique(s.stations_, "$.stations");
  unique(s.seat_classes_, "$.seat_classes");
  unique(ids_of(s.corridors_), "$.corridors");
  unique(ids_of(s.lines_), "$.lines");
  unique(ids_of(s.rolling_stock_), "$.rolling_stock");
  unique(ids_of(s.agents_), "$.agents");
  unique(ids_of(s.services_), "$.services");
  unique(ids_of(s.passenger_types_), "$.passenger_types");

  auto const n_stations = s.stations_.size();
  auto const station_ok = [&](station_idx x) { return x.get() < n_stations; };

  for (auto i = 0U; i != s.corridors_.size(); ++i) {
    for (auto const st : s.corridors_[i].stations_) {
      if (!station_ok(st)) {
        throw validation_error{"$.corridors[" + std::to_string(i) + "]",
                               "unknown station"};
      }
    }
  }
  for (auto i = 0U; i != s.lines_.size(); ++i) {
    auto const& l = s.lines_[i];
    auto const path = "$.lines[" + std::to_string(i) + "]";
    if (l.corridor_ >= s.corridors_.size()) {
      throw validation_error{path + ".corridor", "unknown corridor"};
    }
    if (l.stops_.size() < 2U) {
      throw validation_error{path + ".stops", "a line needs >= 2 stops"};
    }
    auto const& cs = s.corridors_[l.corridor_].stations_;
    std::set<station_idx> seen;
    for (auto const st : l.stops_) {
      if (!station_ok(st)) {
        throw validation_error{path + ".stops", "unknown station"};
      }
      if (std::find(begin(cs), end(cs), st) == end(cs)) {
        throw validation_error{path + ".stops",
                               "station \"" + s.stations_[st.get()] +
                                   "\" is not on the line's corridor"};
      }
      if (!seen.insert(st).second) {
        throw validation_error{path + ".stops", "line visits a station twice"};
      }
    }
  }
  for (auto i = 0U; i != s.rolling_stock_.size(); ++i) {
    if (s.rolling_stock_[i].capacity_.size() != s.seat_classes_.size()) {
      throw validation_error{
          "$.rolling_stock[" + std::to_string(i) + "].capacity",
          "capacity table does not match seat classes"};
    }
  }

  if (s.agents_.empty()) {
    throw validation_error{"$.agents", "at least one agent is required"};
  }
  std::vector<int> owner(s.services_.size(), -1);
  for (auto a = 0U; a != s.agents_.size(); ++a) {
    auto const path = "$.agents[" + std::to_string(a) + "].services";
    if (s.agents_[a].services_.empty()) {
      throw validation_error{path, "an agent must operate >= 1 service"};
    }
    for (auto const svc : s.agents_[a].services_) {
      if (svc.get() >= s.services_.size()) {
        throw validation_error{path, "unknown service"};
      }
      if (owner[svc.get()] != -1) {
        throw validation_error{path, "service \"" +
                                         s.services_[svc.get()].id_ +
                                         "\" is listed by two agents"};
      }
      owner[svc.get()] = static_cast<int>(a);
    }
  }

  for (auto i = 0U; i != s.services_.size(); ++i) {
    auto const& t = s.services_[i];
    auto const path = "$.services[" + std::to_string(i) + "]";
    if (t.operator_.get() >= s.agents_.size()) {
      throw validation_error{path + ".operator", "undeclared agent"};
    }
    if (owner[i] != static_cast<int>(t.operator_.get())) {
      throw validation_error{path + ".operator",
                             "operator does not list this service"};
    }
    if (t.line_ >= s.lines_.size()) {
      throw validation_error{path + ".line", "unknown line"};
    }
    if (t.rolling_stock_ >= s.rolling_stock_.size()) {
      throw validation_error{path + ".rolling_stock", "unknown rolling stock"};
    }
    auto const& stops = s.lines_[t.line_].stops_;
    if (t.times_.size() != stops.size()) {
      throw validation_error{path + ".times",
                             "expected one time per line stop"};
    }
    for (auto k = 1U; k < t.times_.size(); ++k) {
      if (!(t.times_[k] > t.times_[k - 1])) {
        throw validation_error{path + ".times",
                               "stop times must be strictly increasing"};
      }
    }
    std::set<std::tuple<station_idx, station_idx, seat_class_idx>> cells;
    for (auto k = 0U; k != t.prices_.size(); ++k) {
      auto const& c = t.prices_[k];
      auto const cpath = path + ".prices[" + std::to_string(k) + "]";
      auto const o = std::find(begin(stops), end(stops), c.origin_);
      auto const d = std::find(begin(stops), end(stops), c.destination_);
      if (o == end(stops) || d == end(stops) || !(o < d)) {
        throw validation_error{cpath, "origin/destination must be stops of "
                                      "the line in travel order"};
      }
      if (c.seat_.get() >= s.seat_classes_.size()) {
        throw validation_error{cpath + ".seat", "unknown seat class"};
      }
      if (c.price_ < money{}) {
        throw validation_error{cpath + ".price", "price must be >= 0"};
      }
      if (!cells.emplace(c.origin_, c.destination_, c.seat_).second) {
        throw validation_error{cpath, "duplicate price cell"};
      }
    }
  }

  for (auto i = 0U; i != s.passenger_types_.size(); ++i) {
    auto const& t = s.passenger_types_[i];
    auto const path = "$.passenger_types[" + std::to_string(i) + "]";
    if (t.tsp_affinity_.size() != s.agents_.size() ||
        t.seat_utility_.size() != s.seat_classes_.size()) {
      throw validation_error{path, "utility tables do not match scenario"};
    }
    check_curve(t.arrival_penalty_, path + ".arrival_penalty");
    check_curve(t.departure_penalty_, path + ".departure_penalty");
    check_curve(t.price_sensitivity_, path + ".price_sensitivity");
    check_curve(t.travel_time_penalty_, path + ".travel_time_penalty");
    check_curve(t.transfer_time_penalty_, path + ".transfer_time_penalty");
    if (t.transfer_count_penalty_ < 0.0) {
      throw validation_error{path + ".transfer_count_penalty", "must be >= 0"};
    }
    if (t.noise_.distribution_ != noise_distribution::none &&
        !(t.noise_.scale_ > 0.0)) {
      throw validation_error{path + ".noise.scale", "noise scale must be > 0"};
    }
    if (t.purchase_anticipation_.empty()) {
      throw validation_error{path + ".purchase_anticipation",
                             "must not be empty"};
    }
    auto sum = 0.0;
    for (auto const p : t.purchase_anticipation_) {
      if (p < 0.0) {
        throw validation_error{path + ".purchase_anticipation",
                               "probabilities must be >= 0"};
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw validation_error{path + ".purchase_anticipation",
                             "probabilities must sum to 1"};
    }
    if (t.preferred_departure_.from_ > t.preferred_departure_.to_ ||
        t.preferred_arrival_.from_ > t.preferred_arrival_.to_) {
      throw validation_error{path, "preferred time window is reversed"};
    }
  }

  if (s.markets_.empty()) {
    throw validation_error{"$.markets", "at least one market is required"};
  }
  auto any_positive = false;
  auto daily_total = 0.0;
  std::set<std::pair<station_idx, station_idx>> seen_markets;
  for (auto i = 0U; i != s.markets_.size(); ++i) {
    auto const& m = s.markets_[i];
    auto const path = "$.markets[" + std::to_string(i) + "]";
    if (!station_ok(m.origin_) || !station_ok(m.destination_) ||
        m.origin_ == m.destination_) {
      throw validation_error{path, "origin and destination must be distinct "
                                   "known stations"};
    }
    if (!seen_markets.emplace(m.origin_, m.destination_).second) {
      throw validation_error{path, "duplicate market"};
    }
    if (m.mean_ < 0.0) {
      throw validation_error{path + ".volume.mean", "mean must be >= 0"};
    }
    if (m.distribution_ == volume_distribution::constant &&
        m.mean_ != std::floor(m.mean_)) {
      throw validation_error{path + ".volume.mean",
                             "constant volume must be an integer"};
    }
    any_positive = any_positive || m.mean_ > 0.0;
    daily_total += m.mean_;
    if (m.type_mixture_.size() != s.passenger_types_.size()) {
      throw validation_error{path + ".type_mixture", "size mismatch"};
    }
    auto sum = 0.0;
    for (auto const p : m.type_mixture_) {
      if (p < 0.0) {
        throw validation_error{path + ".type_mixture",
                               "probabilities must be >= 0"};
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw validation_error{path + ".type_mixture",
                             "probabilities must sum to 1"};
    }
  }
  if (!any_positive) {
    throw validation_error{"$.markets",
                           "at least one market needs positive demand"};
  }

  if (s.episode_.horizon_days_ < 1) {
    throw validation_error{"$.episode.horizon_days", "must be >= 1"};
  }
  auto const expected = daily_total * s.episode_.horizon_days_;
  if (!(s.episode_.passengers_expected_total_ > 0.0) ||
      std::fabs(expected - s.episode_.passengers_expected_total_) >
          1e-6 * std::max(1.0, expected)) {
    throw validation_error{
        "$.episode.passengers_expected_total",
        "must be positive and equal horizon_days * sum of market means (" +
            std::to_string(expected) + ")"};
  }
  if (s.min_transfer_minutes_ < 0) {
    throw validation_error{"$.min_transfer_minutes", "must be >= 0"};
  }
  if (s.time_slot_minutes_ < 1) {
    throw validation_error{"$.time_slot_minutes", "must be positive"};
  }
  if (!(s.price_step_percent_ > 0.0) || !std::isfinite(s.price_step_percent_)) {
    throw validation_error{"$.price_step_percent", "must be > 0"};
  }
}

scenario load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (json::parse_error const& e) {
    throw syntax_error{e.what()};
  }
  auto s = from_json(doc);
  validate(s);
  return s;
}

scenario load_scenario_arg(std::string const& path_or_preset) {
  std::ifstream in{path_or_preset, std::ios::binary};
  if (!in) {
    return preset(path_or_preset);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize(scenario const& s) { return to_json(s).dump(2) + "\n"; }

std::uint64_t scenario_hash(scenario const& s) {
  auto h = 0xcbf29ce484222325ULL;
  for (auto const c : serialize(s)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace railpricing
