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

#include "railpricing/agents.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace railpricing {

using json = nlohmann::ordered_json;

std::vector<double> random_action(action_space const& space, rng& r) {
  std::vector<double> a(space.dims_);
  for (auto& x : a) {
    x = space.mode_ == action_mode::kContinuous
            ? r.uniform(-1.0, 1.0)
            : static_cast<double>(r.below(kDiscreteLevels));
  }
  return a;
}

random_policy::random_policy(action_space space, std::uint64_t seed)
    : space_{std::move(space)}, rng_{seed} {}

std::vector<double> random_policy::act(agent_observation const&) {
  return random_action(space_, rng_);
}

scripted_policy::scripted_policy(action_space const& space,
                                 std::vector<std::vector<double>> schedule)
    : schedule_{std::move(schedule)} {
  if (schedule_.empty()) {
    throw malformed_action{"empty action schedule"};
  }
  for (auto const& a : schedule_) {
    if (a.size() != space.dims_) {
      throw malformed_action{"scripted action has " +
                             std::to_string(a.size()) + " dimensions, expected " +
                             std::to_string(space.dims_)};
    }
  }
}

std::vector<double> scripted_policy::act(agent_observation const& obs) {
  auto const i = std::min(static_cast<std::size_t>(std::max(obs.day_, 0)),
                          schedule_.size() - 1U);
  return schedule_[i];
}

std::map<std::string, std::vector<std::vector<double>>> load_script(
    std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (json::parse_error const& e) {
    throw syntax_error{std::string{"script: "} + e.what()};
  }
  auto const fail = [](std::string const& path, std::string const& what) {
    throw validation_error{path, what};
  };
  if (!j.is_object()) {
    fail("$", "expected an object");
  }
  for (auto const& [k, v] : j.items()) {
    if (k != "schema_version" && k != "agents") {
      fail("$." + k, "unknown key");
    }
  }
  if (!j.contains("schema_version") || j["schema_version"] != 1) {
    fail("$.schema_version", "expected schema_version 1");
  }
  if (!j.contains("agents") || !j["agents"].is_object()) {
    fail("$.agents", "expected an object of agent schedules");
  }
  std::map<std::string, std::vector<std::vector<double>>> out;
  for (auto const& [id, steps] : j["agents"].items()) {
    auto const path = "$.agents." + id;
    if (!steps.is_array() || steps.empty()) {
      fail(path, "expected a non-empty array of actions");
    }
    auto& schedule = out[id];
    for (auto i = 0U; i != steps.size(); ++i) {
      auto const& a = steps[i];
      if (!a.is_array()) {
        fail(path + "[" + std::to_string(i) + "]", "expected an array");
      }
      std::vector<double> v;
      for (auto const& x : a) {
        if (!x.is_number()) {
          fail(path + "[" + std::to_string(i) + "]", "expected numbers");
        }
        v.push_back(x.get<double>());
      }
      schedule.push_back(std::move(v));
    }
  }
  return out;
}

q_table_learner::q_table_learner(std::size_t n_actions, q_config config)
    : n_actions_{n_actions}, config_{config} {
  if (n_actions_ == 0U) {
    throw incompatible_space{"q-table needs at least one action"};
  }
  if (!(config_.learning_rate_ > 0.0 && config_.learning_rate_ <= 1.0)) {
    throw out_of_range{"learning rate must be in (0, 1]"};
  }
  if (!(config_.gamma_ >= 0.0 && config_.gamma_ <= 1.0)) {
    throw out_of_range{"discount factor must be in [0, 1]"};
  }
}

std::size_t q_table_learner::greedy(std::string const& state) const {
  auto const it = table_.find(state);
  if (it == end(table_)) {
    return 0U;
  }
  auto const& q = it->second;
  return static_cast<std::size_t>(
      std::distance(begin(q), std::max_element(begin(q), end(q))));
}

std::size_t q_table_learner::epsilon_greedy(std::string const& state,
                                            double epsilon, rng& r) const {
  if (r.uniform01() < epsilon) {
    return r.below(n_actions_);
  }
  return greedy(state);
}

double q_table_learner::value(std::string const& state,
                              std::size_t action) const {
  auto const it = table_.find(state);
  return it == end(table_) ? 0.0 : it->second.at(action);
}

void q_table_learner::update(std::string const& state, std::size_t action,
                             double reward, std::string const& next,
                             bool terminal) {
  if (action >= n_actions_) {
    throw out_of_range{"action index " + std::to_string(action) +
                       " outside the q-table"};
  }
  auto target = reward;
  if (!terminal) {
    target += config_.gamma_ * value(next, greedy(next));
  }
  auto& q = table_.try_emplace(state, n_actions_, 0.0).first->second;
  q[action] += config_.learning_rate_ * (target - q[action]);
}

json q_table_learner::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["n_actions"] = n_actions_;
  j["learning_rate"] = config_.learning_rate_;
  j["gamma"] = config_.gamma_;
  j["epsilon_start"] = config_.epsilon_start_;
  j["epsilon_end"] = config_.epsilon_end_;
  j["decay_episodes"] = config_.decay_episodes_;
  json t = json::object();
  for (auto const& [k, q] : table_) {
    t[k] = q;
  }
  j["table"] = std::move(t);
  return j;
}

q_table_learner q_table_learner::from_json(json const& j) {
  try {
    if (j.at("schema_version") != 1) {
      throw validation_error{"$.schema_version", "expected 1"};
    }
    q_config c;
    c.learning_rate_ = j.at("learning_rate").get<double>();
    c.gamma_ = j.at("gamma").get<double>();
    c.epsilon_start_ = j.at("epsilon_start").get<double>();
    c.epsilon_end_ = j.at("epsilon_end").get<double>();
    c.decay_episodes_ = j.at("decay_episodes").get<std::uint64_t>();
    q_table_learner l{j.at("n_actions").get<std::size_t>(), c};
    for (auto const& [k, q] : j.at("table").items()) {
      auto v = q.get<std::vector<double>>();
      if (v.size() != l.n_actions_) {
        throw validation_error{"$.table." + k, "wrong number of actions"};
      }
      l.table_.emplace(k, std::move(v));
    }
    return l;
  } catch (json::exception const& e) {
    throw validation_error{"$", std::string{"q-table: "} + e.what()};
  }
}

int price_bin(money p, money p0) {
  if (p0.cents() <= 0) {
    return 0;
  }
  // round half up of 10 (p - p0) / p0
  auto const num = static_cast<__int128>(p.cents() - p0.cents()) * 20 +
                   static_cast<__int128>(p0.cents());
  auto const den = static_cast<__int128>(p0.cents()) * 2;
  auto q = num / den;
  if (num % den != 0 && num < 0) {
    --q;
  }
  return static_cast<int>(std::clamp(q, static_cast<__int128>(-10),
                                     static_cast<__int128>(10)));
}

std::string state_digest(scenario const& s, agent_idx agent,
                         agent_observation const& obs) {
  auto key = "t" + std::to_string(obs.day_);
  for (auto const svc : s.agents_[agent.get()].services_) {
    auto const& t = s.services_[svc.get()];
    auto const it = std::find_if(
        begin(obs.services_), end(obs.services_),
        [&](service_observation const& o) { return o.service_ == svc; });
    for (auto k = 0U; k != t.prices_.size(); ++k) {
      auto const p = it == end(obs.services_) ? t.prices_[k].price_
                                              : it->cells_[k].price_;
      key += (k == 0U ? '|' : ',') + std::to_string(price_bin(p, t.prices_[k].price_));
    }
  }
  return key;
}

std::size_t encode_levels(std::span<double const> levels) {
  std::size_t index = 0U;
  for (auto k = levels.size(); k-- != 0U;) {
    index = index * kDiscreteLevels + static_cast<std::size_t>(levels[k]);
  }
  return index;
}

std::vector<double> decode_levels(std::size_t index, std::size_t dims) {
  std::vector<double> out(dims);
  for (auto& x : out) {
    x = static_cast<double>(index % kDiscreteLevels);
    index /= kDiscreteLevels;
  }
  return out;
}

namespace {

std::size_t joint_actions(std::size_t dims) {
  if (dims > 4U) {
    throw incompatible_space{"tabular q-learning supports at most 4 action "
                             "dimensions per agent"};
  }
  std::size_t n = 1U;
  for (auto i = 0U; i != dims; ++i) {
    n *= kDiscreteLevels;
  }
  return n;
}

}  // namespace

tabular_q_policy::tabular_q_policy(scenario const& s, agent_idx agent,
                                   action_space const& space, q_config config,
                                   std::uint64_t seed)
    : scenario_{&s},
      agent_{agent},
      dims_{space.dims_},
      learner_{space.mode_ == action_mode::kDiscrete
                   ? joint_actions(space.dims_)
                   : throw incompatible_space{
                         "tabular q-learning needs the discrete action space"},
               config},
      rng_{seed} {}

double tabular_q_policy::epsilon() const {
  auto const& c = learner_.config();
  if (c.decay_episodes_ == 0U || episodes_ >= c.decay_episodes_) {
    return c.epsilon_end_;
  }
  auto const f =
      static_cast<double>(episodes_) / static_cast<double>(c.decay_episodes_);
  return c.epsilon_start_ + f * (c.epsilon_end_ - c.epsilon_start_);
}

std::vector<double> tabular_q_policy::act(agent_observation const& obs) {
  auto const key = state_digest(*scenario_, agent_, obs);
  auto const a = training_ ? learner_.epsilon_greedy(key, epsilon(), rng_)
                           : learner_.greedy(key);
  return decode_levels(a, dims_);
}

void tabular_q_policy::learn(agent_observation const& before,
                             std::vector<double> const& action, double reward,
                             agent_observation const& after, bool terminal) {
  if (!training_) {
    return;
  }
  learner_.update(state_digest(*scenario_, agent_, before),
                  encode_levels(action), reward,
                  state_digest(*scenario_, agent_, after), terminal);
}

std::string_view to_string(action_bin b) {
  switch (b) {
    case action_bin::kMaxReduction: return "max_reduction";
    case action_bin::kModerateReduction: return "moderate_reduction";
    case action_bin::kNoChange: return "no_change";
    case action_bin::kModerateIncrease: return "moderate_increase";
    case action_bin::kMaxIncrease: return "max_increase";
  }
  return "unknown";
}

action_bin bin_of_level(int level) {
  if (level < 0 || level >= kDiscreteLevels) {
    throw out_of_range{"action level " + std::to_string(level) +
                       " outside [0, 10]"};
  }
  if (level <= 1) {
    return action_bin::kMaxReduction;
  }
  if (level <= 4) {
    return action_bin::kModerateReduction;
  }
  if (level == 5) {
    return action_bin::kNoChange;
  }
  if (level <= 8) {
    return action_bin::kModerateIncrease;
  }
  return action_bin::kMaxIncrease;
}

json policy_distribution::to_json() const {
  auto rows = json::array();
  for (auto const& r : rows_) {
    json j;
    j["agent"] = r.agent_;
    j["dimension"] = r.label_;
    j["market"] = r.market_;
    j["count"] = r.count_;
    json f = json::object();
    for (auto b = 0U; b != kActionBins; ++b) {
      f[std::string{to_string(static_cast<action_bin>(b))}] = r.frequency_[b];
    }
    j["frequency"] = std::move(f);
    rows.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)}};
}

policy_distribution log_policy_distribution(
    pricing_env const& env, std::span<action_trace const> traces) {
  if (env.mode() != action_mode::kDiscrete) {
    throw incompatible_space{"policy distribution needs discrete actions"};
  }
  auto const& s = env.get_scenario();
  policy_distribution out;
  std::vector<std::vector<std::size_t>> row_of(env.n_agents());
  for (auto a = 0U; a != env.n_agents(); ++a) {
    auto const space = env.get_action_space(agent_idx{a});
    for (auto k = 0U; k != space.dims_; ++k) {
      policy_distribution_row row;
      row.agent_ = s.agents_[a].id_;
      row.label_ = space.labels_[k];
      auto const cells = env.dimension_cells(agent_idx{a}, k);
      if (!cells.empty()) {
        auto const& c =
            env.supply().instance(cells.front().instance_).cells_[cells.front().cell_];
        row.market_ = s.stations_[c.origin_.get()] + "-" +
                      s.stations_[c.destination_.get()];
      }
      row_of[a].push_back(out.rows_.size());
      out.rows_.push_back(std::move(row));
    }
  }

  std::vector<std::array<std::uint64_t, kActionBins>> counts(out.rows_.size());
  auto total = std::uint64_t{0U};
  for (auto const& trace : traces) {
    for (auto const& step : trace) {
      if (step.per_agent_.size() != env.n_agents()) {
        throw malformed_action{"trace step has the wrong number of agents"};
      }
      for (auto a = 0U; a != env.n_agents(); ++a) {
        auto const& v = step.per_agent_[a];
        if (v.size() != row_of[a].size()) {
          throw malformed_action{"trace action has the wrong dimension"};
        }
        for (auto k = 0U; k != v.size(); ++k) {
          if (v[k] != std::floor(v[k])) {
            throw malformed_action{"trace action is not a discrete level"};
          }
          auto const b = bin_of_level(static_cast<int>(v[k]));
          ++counts[row_of[a][k]][static_cast<std::size_t>(b)];
        }
      }
      ++total;
    }
  }
  if (total == 0U) {
    throw empty_trace{"no actions recorded"};
  }
  for (auto i = 0U; i != out.rows_.size(); ++i) {
    auto n = std::uint64_t{0U};
    for (auto const c : counts[i]) {
      n += c;
    }
    out.rows_[i].count_ = n;
    for (auto b = 0U; b != kActionBins; ++b) {
      out.rows_[i].frequency_[b] =
          n == 0U ? 0.0
                  : static_cast<double>(counts[i][b]) / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace railpricing
