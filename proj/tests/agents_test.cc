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

#include <cmath>
#include <vector>

#include "doctest.h"

#include "railpricing/agents.h"

using namespace railpricing;

namespace {

action_space discrete_space(std::size_t dims) {
  action_space s;
  s.mode_ = action_mode::kDiscrete;
  s.dims_ = dims;
  s.labels_.assign(dims, "x");
  return s;
}

action_space continuous_space(std::size_t dims) {
  auto s = discrete_space(dims);
  s.mode_ = action_mode::kContinuous;
  return s;
}

joint_action constant_levels(pricing_env const& env, double level) {
  joint_action a;
  for (auto i = 0U; i != env.n_agents(); ++i) {
    a.per_agent_.emplace_back(env.get_action_space(agent_idx{i}).dims_, level);
  }
  return a;
}

}  // namespace

TEST_CASE("random discrete actions are uniform") {
  rng r{1U};
  auto const space = discrete_space(1);
  std::vector<double> counts(kDiscreteLevels, 0.0);
  constexpr auto kDraws = 100000;
  for (auto i = 0; i != kDraws; ++i) {
    auto const a = random_action(space, r);
    REQUIRE(a.size() == 1U);
    REQUIRE(a[0] == std::floor(a[0]));
    counts[static_cast<std::size_t>(a[0])] += 1.0;
  }
  for (auto const c : counts) {
    CHECK(std::abs(c / kDraws - 1.0 / 11.0) < 0.01);
  }
}

TEST_CASE("random continuous actions are centred") {
  random_policy p{continuous_space(2), 8U};
  agent_observation obs;
  std::vector<double> mean(2, 0.0);
  constexpr auto kDraws = 100000;
  for (auto i = 0; i != kDraws; ++i) {
    auto const a = p.act(obs);
    for (auto k = 0U; k != 2U; ++k) {
      REQUIRE(a[k] >= -1.0);
      REQUIRE(a[k] <= 1.0);
      mean[k] += a[k] / kDraws;
    }
  }
  CHECK(std::abs(mean[0]) < 0.02);
  CHECK(std::abs(mean[1]) < 0.02);

  random_policy a{continuous_space(3), 99U};
  random_policy b{continuous_space(3), 99U};
  for (auto i = 0; i != 100; ++i) {
    CHECK(a.act(obs) == b.act(obs));
  }
}

TEST_CASE("scripted schedules") {
  scripted_policy p{continuous_space(1), {{0.5}, {-1.0}}};
  agent_observation obs;
  obs.day_ = 0;
  CHECK(p.act(obs) == std::vector<double>{0.5});
  obs.day_ = 1;
  CHECK(p.act(obs) == std::vector<double>{-1.0});
  obs.day_ = 4;
  CHECK(p.act(obs) == std::vector<double>{-1.0});
  CHECK_THROWS_AS((scripted_policy{continuous_space(2), {{0.5}}}),
                  malformed_action);

  auto const script = load_script(
      R"({"schema_version": 1, "agents": {"agent_1": [[1.0], [0.0]]}})");
  REQUIRE(script.contains("agent_1"));
  CHECK(script.at("agent_1").size() == 2U);
  CHECK_THROWS(load_script(R"({"agents": 3})"));
}

TEST_CASE("joint level encoding") {
  for (auto dims = 1U; dims <= 3U; ++dims) {
    auto n = std::size_t{1U};
    for (auto k = 0U; k != dims; ++k) {
      n *= kDiscreteLevels;
    }
    for (auto i = 0U; i != n; ++i) {
      auto const levels = decode_levels(i, dims);
      REQUIRE(levels.size() == dims);
      CHECK(encode_levels(levels) == i);
    }
  }
  std::vector<double> const l{3.0, 7.0};
  CHECK(encode_levels(l) == 3U + 7U * 11U);
}

TEST_CASE("price bins") {
  auto const p0 = money::from_units(50.0);
  CHECK(price_bin(p0, p0) == 0);
  CHECK(price_bin(money::from_units(55.0), p0) == 1);
  CHECK(price_bin(money::from_units(52.5), p0) == 1);
  CHECK(price_bin(money::from_units(47.5), p0) == 0);
  CHECK(price_bin(money::from_units(47.0), p0) == -1);
  CHECK(price_bin(money{}, p0) == -10);
  CHECK(price_bin(money::from_units(500.0), p0) == 10);
}

TEST_CASE("state digest") {
  pricing_env env{preset("business"), action_mode::kDiscrete};
  auto const obs = env.reset(0U);
  auto const& s = env.get_scenario();
  CHECK(state_digest(s, agent_idx{0}, obs[0]) == "t0|0");
  CHECK(state_digest(s, agent_idx{1}, obs[1]) == "t0|0|0");
  auto const next = env.step(constant_levels(env, 10.0)).observations_;
  CHECK(state_digest(s, agent_idx{0}, next[0]) == "t1|3");
}

TEST_CASE("tabular q-learning") {
  SUBCASE("continuous spaces are rejected") {
    pricing_env env{preset("business")};
    CHECK_THROWS_AS((tabular_q_policy{env.get_scenario(), agent_idx{0},
                                      env.get_action_space(agent_idx{0}),
                                      q_config{}, 1U}),
                    incompatible_space);
  }
  SUBCASE("full exploration is uniform") {
    pricing_env env{preset("business"), action_mode::kDiscrete};
    q_config cfg;
    cfg.epsilon_start_ = cfg.epsilon_end_ = 1.0;
    tabular_q_policy p{env.get_scenario(), agent_idx{1},
                       env.get_action_space(agent_idx{1}), cfg, 3U};
    CHECK(p.epsilon() == 1.0);
    auto const obs = env.reset(0U);
    std::vector<double> counts(kDiscreteLevels, 0.0);
    constexpr auto kDraws = 50000;
    for (auto i = 0; i != kDraws; ++i) {
      auto const a = p.act(obs[1]);
      REQUIRE(a.size() == 2U);
      counts[static_cast<std::size_t>(a[1])] += 1.0;
    }
    for (auto const c : counts) {
      CHECK(std::abs(c / kDraws - 1.0 / 11.0) < 0.01);
    }
  }
  SUBCASE("epsilon decays linearly") {
    pricing_env env{preset("business"), action_mode::kDiscrete};
    q_config cfg;
    cfg.decay_episodes_ = 4U;
    cfg.epsilon_start_ = 1.0;
    cfg.epsilon_end_ = 0.2;
    tabular_q_policy p{env.get_scenario(), agent_idx{0},
                       env.get_action_space(agent_idx{0}), cfg, 3U};
    CHECK(p.epsilon() == doctest::Approx(1.0));
    p.end_episode();
    p.end_episode();
    CHECK(p.epsilon() == doctest::Approx(0.6));
    p.end_episode();
    p.end_episode();
    p.end_episode();
    CHECK(p.epsilon() == doctest::Approx(0.2));
  }
}

TEST_CASE("greedy ties go to the lowest action") {
  q_table_learner q{4U, q_config{}};
  CHECK(q.greedy("unseen") == 0U);
  q.update("s", 2U, 1.0, "s", true);
  q.update("s", 3U, 1.0, "s", true);
  CHECK(q.greedy("s") == 2U);
  CHECK(q.value("s", 2U) == doctest::Approx(0.1));

  auto const copy = q_table_learner::from_json(q.to_json());
  CHECK(copy.value("s", 3U) == q.value("s", 3U));
  CHECK(copy.n_actions() == 4U);
  CHECK(copy.size() == q.size());
}

TEST_CASE("q-learning solves a two-state problem") {
  // s0: action 1 pays 1 and moves to s1, action 0 pays 0 and stays.
  // s1: action 0 pays 2 and moves to s0, action 1 pays 0 and stays.
  q_config cfg;
  cfg.learning_rate_ = 0.2;
  cfg.gamma_ = 0.9;
  q_table_learner q{2U, cfg};
  rng r{4U};
  std::string state = "s0";
  for (auto i = 0; i != 10000; ++i) {
    auto const a = static_cast<std::size_t>(r.below(2U));
    auto reward = 0.0;
    auto next = state;
    if (state == "s0" && a == 1U) {
      reward = 1.0;
      next = "s1";
    } else if (state == "s1" && a == 0U) {
      reward = 2.0;
      next = "s0";
    }
    q.update(state, a, reward, next, false);
    state = next;
  }
  CHECK(q.greedy("s0") == 1U);
  CHECK(q.greedy("s1") == 0U);
  // optimal values: V0 = 1 + 0.9 V1, V1 = 2 + 0.9 V0
  auto const v0 = (1.0 + 0.9 * 2.0) / (1.0 - 0.81);
  CHECK(q.value("s0", 1U) == doctest::Approx(v0).epsilon(0.05));
}

TEST_CASE("action bins") {
  std::vector<action_bin> const expected{
      action_bin::kMaxReduction,      action_bin::kMaxReduction,
      action_bin::kModerateReduction, action_bin::kModerateReduction,
      action_bin::kModerateReduction, action_bin::kNoChange,
      action_bin::kModerateIncrease,  action_bin::kModerateIncrease,
      action_bin::kModerateIncrease,  action_bin::kMaxIncrease,
      action_bin::kMaxIncrease};
  for (auto level = 0; level != kDiscreteLevels; ++level) {
    CHECK(bin_of_level(level) == expected[level]);
  }
  CHECK(to_string(action_bin::kNoChange) == "no_change");
}

TEST_CASE("policy distribution") {
  pricing_env env{preset("business"), action_mode::kDiscrete};

  SUBCASE("constant policy") {
    std::vector<action_trace> traces(2, action_trace(5, constant_levels(env, 5.0)));
    auto const d = log_policy_distribution(env, traces);
    REQUIRE(d.rows_.size() == 5U);
    for (auto const& row : d.rows_) {
      CHECK(row.frequency_[2] == 1.0);
      CHECK(row.count_ == 10U);
    }
    CHECK(d.rows_[0].agent_ == "agent_1");
    CHECK(d.rows_[0].market_ == "A-C");
  }
  SUBCASE("every level once") {
    action_trace trace;
    for (auto level = 0; level != kDiscreteLevels; ++level) {
      trace.push_back(constant_levels(env, level));
    }
    std::vector<action_trace> const traces{trace};
    auto const d = log_policy_distribution(env, traces);
    std::array<double, kActionBins> const expected{2.0 / 11, 3.0 / 11, 1.0 / 11,
                                                   3.0 / 11, 2.0 / 11};
    for (auto const& row : d.rows_) {
      auto sum = 0.0;
      for (auto b = 0U; b != kActionBins; ++b) {
        CHECK(row.frequency_[b] == doctest::Approx(expected[b]));
        sum += row.frequency_[b];
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(log_policy_distribution(env, {}), empty_trace);
    std::vector<action_trace> const empty(3);
    CHECK_THROWS_AS(log_policy_distribution(env, empty), empty_trace);
    pricing_env continuous{preset("business")};
    std::vector<action_trace> const traces{
        action_trace(1, constant_levels(continuous, 0.0))};
    CHECK_THROWS_AS(log_policy_distribution(continuous, traces),
                    incompatible_space);
  }
}
