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

#include "railpricing/env.h"

#include <cmath>
#include <string>

namespace railpricing {

using json = nlohmann::ordered_json;

namespace {

// Independent streams of one episode.
constexpr auto kDemandStream = 1U;
constexpr auto kChoiceStream = 2U;

}  // namespace

std::string_view to_string(action_mode m) {
  return m == action_mode::kContinuous ? "continuous" : "discrete";
}

json action_space::to_json() const {
  json j;
  if (mode_ == action_mode::kContinuous) {
    j["kind"] = "box";
    j["low"] = -1.0;
    j["high"] = 1.0;
  } else {
    j["kind"] = "multi_discrete";
    j["n"] = kDiscreteLevels;
  }
  j["shape"] = {dims_};
  j["labels"] = labels_;
  return j;
}

json agent_observation::to_json(scenario const& s) const {
  json j;
  j["agent"] = s.agents_[agent_.get()].id_;
  j["day"] = day_;
  auto services = json::array();
  for (auto const& svc : services_) {
    json o;
    o["service"] = svc.service_.get();
    o["travel_date"] = svc.travel_date_;
    o["operator"] = svc.operator_;
    o["corridor"] = svc.corridor_;
    o["line"] = svc.line_;
    o["time_slot"] = svc.time_slot_;
    o["rolling_stock"] = svc.rolling_stock_;
    auto cells = json::array();
    for (auto const& c : svc.cells_) {
      json cj;
      cj["origin"] = c.origin_.get();
      cj["destination"] = c.destination_.get();
      cj["seat"] = c.seat_.get();
      cj["price"] = c.price_.units();
      if (c.tickets_sold_.has_value()) {
        cj["tickets_sold"] = *c.tickets_sold_;
      }
      cells.push_back(std::move(cj));
    }
    o["cells"] = std::move(cells);
    services.push_back(std::move(o));
  }
  j["services"] = std::move(services);
  return j;
}

json step_info::to_json(scenario const& s) const {
  json j;
  j["day"] = day_;
  j["passengers_generated"] = passengers_generated_;
  j["passengers_travelled"] = passengers_travelled_;
  j["passengers_opted_out"] = passengers_opted_out_;
  json sold = json::object();
  for (auto a = 0U; a != tickets_sold_.size(); ++a) {
    sold[s.agents_[a].id_] = tickets_sold_[a];
  }
  j["tickets_sold"] = std::move(sold);
  return j;
}

json step_result::to_json(scenario const& s) const {
  json j;
  json obs = json::object();
  json rewards = json::object();
  json cents = json::object();
  for (auto a = 0U; a != observations_.size(); ++a) {
    auto const& id = s.agents_[a].id_;
    obs[id] = observations_[a].to_json(s);
    rewards[id] = rewards_[a].units();
    cents[id] = rewards_[a].cents();
  }
  j["observations"] = std::move(obs);
  j["rewards"] = std::move(rewards);
  j["rewards_cents"] = std::move(cents);
  j["terminal"] = terminal_;
  j["info"] = info_.to_json(s);
  return j;
}

pricing_env::pricing_env(scenario s, action_mode mode)
    : scenario_{std::move(s)}, mode_{mode} {
  railpricing::validate(scenario_);
  supply_ = supply_state{scenario_};
  layout_.resize(scenario_.agents_.size());
  for (auto a = 0U; a != scenario_.agents_.size(); ++a) {
    for (auto const svc : scenario_.agents_[a].services_) {
      auto const& t = scenario_.services_[svc.get()];
      for (auto k = 0U; k != t.prices_.size(); ++k) {
        auto const& c = t.prices_[k];
        dimension d;
        d.label_ = t.id_ + ":" + scenario_.stations_[c.origin_.get()] + "-" +
                   scenario_.stations_[c.destination_.get()] + ":" +
                   scenario_.seat_classes_[c.seat_.get()];
        for (auto i = 0U; i != supply_.instances().size(); ++i) {
          if (supply_.instance(i).service_ == svc) {
            d.cells_.push_back({i, k, 0.0});
          }
        }
        layout_[a].push_back(std::move(d));
      }
    }
  }
  profit_.assign(scenario_.agents_.size(), money{});
}

std::vector<agent_observation> pricing_env::reset(std::uint64_t seed) {
  master_ = rng{seed};
  return reset();
}

std::vector<agent_observation> pricing_env::reset() {
  start_episode(master_.next_u64());
  std::vector<agent_observation> obs;
  for (auto a = 0U; a != n_agents(); ++a) {
    obs.push_back(observe(agent_idx{a}));
  }
  return obs;
}

void pricing_env::start_episode(std::uint64_t episode_seed) {
  demand_rng_ = rng{derive_seed(episode_seed, kDemandStream)};
  choice_rng_ = rng{derive_seed(episode_seed, kChoiceStream)};
  supply_ = supply_state{scenario_};
  day_ = 0;
  started_ = true;
  next_passenger_id_ = 0U;
  profit_.assign(n_agents(), money{});
  log_ = episode_log{};
  log_.profit_ = profit_;
}

std::vector<journey> const& pricing_env::journeys_for(market_idx m,
                                                      day_idx date) {
  auto const key = std::pair{m.get(), date};
  auto it = journeys_.find(key);
  if (it == end(journeys_)) {
    it = journeys_
             .emplace(key, enumerate_journeys(
                               scenario_, supply_, m, date,
                               scenario_.min_transfer_minutes_,
                               scenario_.max_transfers_))
             .first;
  }
  return it->second;
}

void pricing_env::validate(joint_action const& action) const {
  if (action.per_agent_.size() != n_agents()) {
    throw malformed_action{"expected actions for " +
                           std::to_string(n_agents()) + " agents, got " +
                           std::to_string(action.per_agent_.size())};
  }
  for (auto a = 0U; a != n_agents(); ++a) {
    auto const& v = action.per_agent_[a];
    auto const& id = scenario_.agents_[a].id_;
    if (v.size() != layout_[a].size()) {
      throw malformed_action{"agent " + id + ": expected " +
                             std::to_string(layout_[a].size()) +
                             " action dimensions, got " +
                             std::to_string(v.size())};
    }
    for (auto const x : v) {
      if (mode_ == action_mode::kContinuous) {
        if (!(x >= -1.0 && x <= 1.0)) {
          throw malformed_action{"agent " + id +
                                 ": continuous action outside [-1, 1]"};
        }
      } else if (!(x >= 0.0 && x < kDiscreteLevels) || x != std::floor(x)) {
        throw malformed_action{"agent " + id +
                               ": discrete action must be an integer in "
                               "[0, 10]"};
      }
    }
  }
}

step_result pricing_env::step(joint_action const& action) {
  if (!started_) {
    throw already_terminal{"step before reset"};
  }
  if (terminal()) {
    throw already_terminal{"episode is over, call reset"};
  }
  validate(action);

  // Prices are set for the coming day before its demand arrives. Action
  // sets are disjoint by ownership, so the agent order does not matter.
  for (auto a = 0U; a != n_agents(); ++a) {
    std::vector<cell_adjustment> adj;
    for (auto k = 0U; k != layout_[a].size(); ++k) {
      auto const x = action.per_agent_[a][k];
      auto const alpha = mode_ == action_mode::kContinuous
                             ? x
                             : discretize_action(static_cast<int>(x));
      for (auto c : layout_[a][k].cells_) {
        c.alpha_ = alpha;
        adj.push_back(c);
      }
    }
    supply_.apply_price_action(agent_idx{a}, adj,
                               scenario_.price_step_percent_);
  }

  ++day_;
  std::vector<money> before(n_agents());
  for (auto a = 0U; a != n_agents(); ++a) {
    before[a] = supply_.revenue_of(agent_idx{a});
  }

  step_info info;
  info.day_ = day_;
  info.tickets_sold_.assign(n_agents(), 0U);
  auto const demand =
      sample_daily_demand(scenario_, day_, demand_rng_, next_passenger_id_);
  next_passenger_id_ += demand.size();
  info.passengers_generated_ = demand.size();

  for (auto const& p : demand) {
    auto const& candidates = journeys_for(p.market_, p.desired_travel_date_);
    auto const c =
        choose_journey(scenario_, p, candidates, supply_, choice_rng_);
    passenger_record rec;
    rec.passenger_ = p;
    rec.utility_ = c.utility_.total_;
    if (c.travels()) {
      auto const& j = candidates[*c.journey_];
      for (auto i = 0U; i != j.legs_.size(); ++i) {
        auto const inst = j.legs_[i].instance_;
        rec.spend_ += supply_.sell_ticket(inst, c.seats_[i]);
        rec.tickets_.emplace_back(inst, c.seats_[i]);
        ++info.tickets_sold_[supply_.instance(inst).operator_.get()];
      }
      rec.travelled_ = true;
      ++info.passengers_travelled_;
    } else {
      ++info.passengers_opted_out_;
    }
    log_.passengers_.push_back(std::move(rec));
  }

  step_result r;
  r.rewards_.resize(n_agents());
  for (auto a = 0U; a != n_agents(); ++a) {
    auto const now = supply_.revenue_of(agent_idx{a});
    r.rewards_[a] = now - before[a];
    profit_[a] = now;
  }
  r.terminal_ = terminal();
  r.info_ = info;
  for (auto a = 0U; a != n_agents(); ++a) {
    r.observations_.push_back(observe(agent_idx{a}));
  }

  log_.rewards_.push_back(r.rewards_);
  log_.steps_.push_back(info);
  log_.profit_ = profit_;
  log_.complete_ = r.terminal_;
  return r;
}

agent_observation pricing_env::observe(agent_idx agent) const {
  agent_observation o;
  o.agent_ = agent;
  o.day_ = day_;
  for (auto const& inst : supply_.instances()) {
    auto const& t = scenario_.services_[inst.service_.get()];
    service_observation svc;
    svc.service_ = inst.service_;
    svc.travel_date_ = inst.travel_date_;
    svc.operator_ = inst.operator_.get();
    svc.line_ = t.line_;
    svc.corridor_ = scenario_.lines_[t.line_].corridor_;
    svc.time_slot_ =
        static_cast<std::size_t>(t.times_.front() / scenario_.time_slot_minutes_);
    svc.rolling_stock_ = t.rolling_stock_;
    auto const own = inst.operator_ == agent;
    for (auto const& c : inst.cells_) {
      svc.cells_.push_back(
          {c.origin_, c.destination_, c.seat_, c.price_,
           own ? std::optional<std::uint32_t>{c.sold_} : std::nullopt});
    }
    o.services_.push_back(std::move(svc));
  }
  return o;
}

action_space pricing_env::get_action_space(agent_idx agent) const {
  if (agent.get() >= n_agents()) {
    throw unknown_agent{"no agent " + std::to_string(agent.get())};
  }
  action_space sp;
  sp.mode_ = mode_;
  sp.dims_ = layout_[agent.get()].size();
  for (auto const& d : layout_[agent.get()]) {
    sp.labels_.push_back(d.label_);
  }
  return sp;
}

action_space pricing_env::get_action_space(std::string_view agent_id) const {
  auto const a = scenario_.find_agent(agent_id);
  if (!a.has_value()) {
    throw unknown_agent{"unknown agent \"" + std::string{agent_id} + "\""};
  }
  return get_action_space(*a);
}

json pricing_env::observation_space(agent_idx agent) const {
  if (agent.get() >= n_agents()) {
    throw unknown_agent{"no agent " + std::to_string(agent.get())};
  }
  auto const bounded = [](auto lo, auto hi) {
    return json{{"low", lo}, {"high", hi}};
  };
  json j;
  j["day"] = bounded(0, horizon());
  auto services = json::array();
  for (auto const& inst : supply_.instances()) {
    json o;
    o["service"] = inst.service_.get();
    o["travel_date"] = inst.travel_date_;
    o["static"] = {
        {"operator", bounded(0, scenario_.agents_.size() - 1)},
        {"corridor", bounded(0, scenario_.corridors_.size() - 1)},
        {"line", bounded(0, scenario_.lines_.size() - 1)},
        {"time_slot", bounded(0, (48 * 60) / scenario_.time_slot_minutes_)},
        {"rolling_stock", bounded(0, scenario_.rolling_stock_.size() - 1)}};
    auto cells = json::array();
    for (auto const& c : inst.cells_) {
      json cj;
      cj["origin"] = c.origin_.get();
      cj["destination"] = c.destination_.get();
      cj["seat"] = c.seat_.get();
      cj["price"] = {{"low", 0.0},
                     {"high", static_cast<double>(kPriceCeilingCents) / 100.0}};
      if (inst.operator_ == agent) {
        cj["tickets_sold"] = bounded(0U, c.capacity_);
      }
      cells.push_back(std::move(cj));
    }
    o["cells"] = std::move(cells);
    services.push_back(std::move(o));
  }
  j["services"] = std::move(services);
  return j;
}

std::span<cell_adjustment const> pricing_env::dimension_cells(
    agent_idx agent, std::size_t k) const {
  return layout_.at(agent.get()).at(k).cells_;
}

double discounted_return(std::span<double const> rewards, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw out_of_range{"discount factor must be in [0, 1]"};
  }
  auto sum = 0.0;
  auto w = 1.0;
  for (auto const r : rewards) {
    sum += w * r;
    w *= gamma;
  }
  return sum;
}

}  // namespace railpricing
