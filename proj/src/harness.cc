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

#include "railpricing/harness.h"

#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace railpricing {

using json = nlohmann::ordered_json;

namespace {

constexpr auto kToolVersion = "1.0.0";

// Runs fn(0..n-1) on a fixed set of threads and waits for all of them.
class worker_pool {
public:
  explicit worker_pool(std::size_t threads) {
    for (auto i = 1U; i < threads; ++i) {
      workers_.emplace_back([this] { loop(); });
    }
  }

  worker_pool(worker_pool const&) = delete;
  worker_pool& operator=(worker_pool const&) = delete;

  ~worker_pool() {
    {
      std::lock_guard lock{mutex_};
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : workers_) {
      t.join();
    }
  }

  void run(std::size_t n, std::function<void(std::size_t)> const& fn) {
    if (workers_.empty() || n <= 1U) {
      for (auto i = 0U; i != n; ++i) {
        fn(i);
      }
      return;
    }
    {
      std::lock_guard lock{mutex_};
      fn_ = &fn;
      n_ = n;
      next_ = 0U;
      done_ = 0U;
      ++generation_;
    }
    wake_.notify_all();
    work();
    std::unique_lock lock{mutex_};
    finished_.wait(lock, [&] { return done_ == n_; });
    fn_ = nullptr;
  }

private:
  void loop() {
    auto seen = std::uint64_t{0U};
    while (true) {
      {
        std::unique_lock lock{mutex_};
        wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) {
          return;
        }
        seen = generation_;
      }
      work();
    }
  }

  void work() {
    while (true) {
      std::size_t i = 0U;
      std::function<void(std::size_t)> const* fn = nullptr;
      {
        std::lock_guard lock{mutex_};
        if (fn_ == nullptr || next_ >= n_) {
          return;
        }
        i = next_++;
        fn = fn_;
      }
      (*fn)(i);
      {
        std::lock_guard lock{mutex_};
        if (++done_ == n_) {
          finished_.notify_all();
        }
      }
    }
  }

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable finished_;
  std::function<void(std::size_t)> const* fn_{nullptr};
  std::size_t n_{0U};
  std::size_t next_{0U};
  std::size_t done_{0U};
  std::uint64_t generation_{0U};
  bool stop_{false};
};

std::string read_file(std::string const& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw error{"cannot read " + path};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json actions_json(scenario const& s, joint_action const& a) {
  json j = json::object();
  for (auto i = 0U; i != a.per_agent_.size(); ++i) {
    j[s.agents_[i].id_] = a.per_agent_[i];
  }
  return j;
}

struct seed_run {
  run_config const& cfg_;
  std::uint64_t seed_;
  std::vector<std::unique_ptr<agent_policy>> policies_;  // per agent
  std::vector<std::pair<std::size_t, tabular_q_policy*>> learners_;

  void make_policies(pricing_env const& env) {
    auto const& s = cfg_.scenario_;
    std::map<std::string, std::vector<std::vector<double>>> script;
    std::map<std::string, q_table_learner> tables;
    if (cfg_.policy_.kind_ == policy_spec::kind::kScripted) {
      script = cfg_.script_.has_value() ? *cfg_.script_
                                        : load_script(read_file(cfg_.policy_.file_));
    }
    if (cfg_.policy_.kind_ == policy_spec::kind::kTabularQ) {
      if (cfg_.q_tables_.has_value()) {
        tables = *cfg_.q_tables_;
      } else if (!cfg_.policy_.file_.empty()) {
        tables = q_tables_from_json(json::parse(read_file(cfg_.policy_.file_)));
      } else if (cfg_.mode_ == run_mode::kEval) {
        throw error{"tabular-q evaluation needs a q-table file "
                    "(--policy tabular-q:<file>)"};
      }
    }
    for (auto a = 0U; a != env.n_agents(); ++a) {
      auto const space = env.get_action_space(agent_idx{a});
      auto const& id = s.agents_[a].id_;
      auto const policy_seed = derive_seed(seed_, 1000U + a);
      switch (cfg_.policy_.kind_) {
        case policy_spec::kind::kRandom:
          policies_.push_back(
              std::make_unique<random_policy>(space, policy_seed));
          break;
        case policy_spec::kind::kScripted: {
          auto const it = script.find(id);
          if (it == end(script)) {
            throw error{"script has no schedule for agent " + id};
          }
          policies_.push_back(
              std::make_unique<scripted_policy>(space, it->second));
          break;
        }
        case policy_spec::kind::kTabularQ: {
          auto p = std::make_unique<tabular_q_policy>(s, agent_idx{a}, space,
                                                      cfg_.q_, policy_seed);
          if (auto const it = tables.find(id); it != end(tables)) {
            if (it->second.n_actions() != p->learner().n_actions()) {
              throw error{"q-table for " + id +
                          " does not match the action space"};
            }
            p->learner() = it->second;
          } else if (!tables.empty()) {
            throw error{"q-table file has no table for agent " + id};
          }
          p->set_training(cfg_.mode_ == run_mode::kTrain);
          learners_.emplace_back(a, p.get());
          policies_.push_back(std::move(p));
          break;
        }
      }
    }
  }

  seed_result operator()(worker_pool& pool) {
    auto const& s = cfg_.scenario_;
    auto const n = std::max<std::size_t>(cfg_.parallel_, 1U);
    std::vector<pricing_env> envs;
    envs.reserve(n);
    for (auto r = 0U; r != n; ++r) {
      envs.emplace_back(s, cfg_.action_mode_);
    }
    try {
      make_policies(envs.front());
    } catch (std::exception const& e) {
      throw error{"seed " + std::to_string(seed_) + ": " + e.what()};
    }

    seed_result out;
    out.seed_ = seed_;
    out.reports_.resize(cfg_.episodes_);
    out.actions_.resize(cfg_.episodes_);
    auto const tracing = cfg_.episodes_ == 1U && n == 1U;
    auto const n_agents = envs.front().n_agents();

    auto const rounds = (cfg_.episodes_ + n - 1U) / n;
    for (auto round = std::uint64_t{0U}; round != rounds; ++round) {
      std::vector<std::size_t> active;
      for (auto r = 0U; r != n; ++r) {
        if (round * n + r < cfg_.episodes_) {
          active.push_back(r);
        }
      }
      std::vector<std::vector<agent_observation>> obs(n);
      for (auto const r : active) {
        obs[r] = round == 0U ? envs[r].reset(instance_seed(seed_, r, cfg_.mode_))
                             : envs[r].reset();
      }
      if (tracing) {
        json first;
        first["event"] = "reset";
        json o = json::object();
        for (auto a = 0U; a != n_agents; ++a) {
          o[s.agents_[a].id_] = obs[0][a].to_json(s);
        }
        first["observations"] = std::move(o);
        out.trace_.push_back(first.dump());
      }

      for (auto day = 0; day != s.episode_.horizon_days_; ++day) {
        std::vector<joint_action> actions(n);
        for (auto const r : active) {
          for (auto a = 0U; a != n_agents; ++a) {
            actions[r].per_agent_.push_back(policies_[a]->act(obs[r][a]));
          }
        }
        std::vector<step_result> results(n);
        std::vector<std::exception_ptr> errors(active.size());
        pool.run(active.size(), [&](std::size_t i) {
          auto const r = active[i];
          try {
            results[r] = envs[r].step(actions[r]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
        for (auto i = 0U; i != active.size(); ++i) {
          if (errors[i]) {
            try {
              std::rethrow_exception(errors[i]);
            } catch (std::exception const& e) {
              throw error{"seed " + std::to_string(seed_) + ", instance " +
                          std::to_string(active[i]) + ": " + e.what()};
            }
          }
        }
        for (auto const r : active) {
          auto const& res = results[r];
          for (auto a = 0U; a != n_agents; ++a) {
            policies_[a]->learn(obs[r][a], actions[r].per_agent_[a],
                                res.rewards_[a].units(),
                                res.observations_[a], res.terminal_);
          }
          out.actions_[round * n + r].push_back(actions[r]);
          if (tracing) {
            json line;
            line["event"] = "step";
            line["day"] = day;
            line["actions"] = actions_json(s, actions[r]);
            line["result"] = res.to_json(s);
            out.trace_.push_back(line.dump());
          }
          obs[r] = res.observations_;
        }
      }

      for (auto const r : active) {
        out.reports_[round * n + r] =
            make_episode_report(s, envs[r].log());
        for (auto& p : policies_) {
          p->end_episode();
        }
      }
    }

    if (cfg_.action_mode_ == action_mode::kDiscrete && cfg_.episodes_ != 0U) {
      out.distribution_ = log_policy_distribution(envs.front(), out.actions_);
    }
    if (cfg_.mode_ == run_mode::kTrain) {
      for (auto const& [a, l] : learners_) {
        out.q_tables_.emplace(s.agents_[a].id_, l->learner());
      }
    }
    return out;
  }
};

struct stat {
  double sum_{0.0};
  std::uint64_t n_{0U};

  void add(std::optional<double> x) {
    if (x.has_value()) {
      sum_ += *x;
      ++n_;
    }
  }
  std::optional<double> mean() const {
    return n_ == 0U ? std::nullopt : std::optional{sum_ / static_cast<double>(n_)};
  }
};

}  // namespace

std::string_view to_string(run_mode m) {
  return m == run_mode::kTrain ? "train" : "eval";
}

policy_spec policy_spec::parse(std::string_view s) {
  policy_spec p;
  auto const colon = s.find(':');
  auto const name = s.substr(0, colon);
  auto const arg =
      colon == std::string_view::npos ? std::string{} : std::string{s.substr(colon + 1)};
  if (name == "random" && colon == std::string_view::npos) {
    p.kind_ = kind::kRandom;
  } else if (name == "scripted" && !arg.empty()) {
    p.kind_ = kind::kScripted;
    p.file_ = arg;
  } else if (name == "tabular-q") {
    p.kind_ = kind::kTabularQ;
    p.file_ = arg;
  } else {
    throw error{"unknown policy \"" + std::string{s} +
                "\" (expected random, scripted:<file>, tabular-q[:<file>])"};
  }
  return p;
}

std::string policy_spec::str() const {
  switch (kind_) {
    case kind::kRandom: return "random";
    case kind::kScripted: return "scripted:" + file_;
    case kind::kTabularQ: return file_.empty() ? "tabular-q" : "tabular-q:" + file_;
  }
  return "unknown";
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance,
                            run_mode mode) {
  return seed + instance * (mode == run_mode::kTrain ? 1000U : 100000U);
}

run_result run(run_config const& cfg) {
  if (cfg.parallel_ == 0U) {
    throw out_of_range{"parallel must be at least 1"};
  }
  if (cfg.seeds_.empty()) {
    throw out_of_range{"no seeds given"};
  }
  validate(cfg.scenario_);
  worker_pool pool{std::max<std::size_t>(cfg.threads_, 1U)};
  run_result out;
  for (auto const seed : cfg.seeds_) {
    out.seeds_.push_back(seed_run{cfg, seed, {}, {}}(pool));
  }
  out.summary_ = summarize(cfg.scenario_, out.seeds_);
  return out;
}

json summarize(scenario const& s, std::vector<seed_result> const& seeds) {
  std::vector<std::string> names{"total_profit"};
  for (auto const& a : s.agents_) {
    names.push_back("profit." + a.id_);
  }
  names.insert(end(names), {"percent_travelling", "mean_utility_travellers",
                            "mean_utility_all", "equality"});
  for (auto const& t : s.passenger_types_) {
    names.push_back("percent_travelling." + t.id_);
  }

  auto const values = [&](episode_report const& r) {
    std::vector<std::optional<double>> v;
    auto total = money{};
    for (auto const& p : r.profit_) {
      total += p;
    }
    v.emplace_back(total.units());
    for (auto const& p : r.profit_) {
      v.emplace_back(p.units());
    }
    v.push_back(r.percent_travelling_);
    v.push_back(r.mean_utility_travellers_);
    v.push_back(r.mean_utility_all_);
    v.push_back(r.equality_);
    for (auto const& p : r.percent_travelling_by_type_) {
      v.push_back(p);
    }
    return v;
  };

  // Per-seed episode means.
  std::vector<std::vector<std::optional<double>>> per_seed;
  for (auto const& sr : seeds) {
    std::vector<stat> acc(names.size());
    for (auto const& r : sr.reports_) {
      auto const v = values(r);
      for (auto i = 0U; i != v.size(); ++i) {
        acc[i].add(v[i]);
      }
    }
    std::vector<std::optional<double>> m;
    for (auto const& a : acc) {
      m.push_back(a.mean());
    }
    per_seed.push_back(std::move(m));
  }

  json j;
  j["scenario"] = s.name_;
  j["seeds"] = json::array();
  for (auto const& sr : seeds) {
    j["seeds"].push_back(sr.seed_);
  }
  j["episodes_per_seed"] = seeds.empty() ? 0U : seeds.front().reports_.size();
  j["utility_units"] = "utility";
  j["mean_utility_conditioning"] = "travellers";
  json metrics = json::object();
  for (auto i = 0U; i != names.size(); ++i) {
    stat st;
    for (auto const& m : per_seed) {
      st.add(m[i]);
    }
    json e;
    auto const mean = st.mean();
    e["mean"] = mean.has_value() ? json(*mean) : json(nullptr);
    if (mean.has_value() && st.n_ > 1U) {
      auto ss = 0.0;
      for (auto const& m : per_seed) {
        if (m[i].has_value()) {
          ss += (*m[i] - *mean) * (*m[i] - *mean);
        }
      }
      e["sd"] = std::sqrt(ss / static_cast<double>(st.n_ - 1U));
    } else {
      e["sd"] = mean.has_value() ? json(0.0) : json(nullptr);
    }
    e["n_seeds"] = st.n_;
    metrics[names[i]] = std::move(e);
  }
  j["metrics"] = std::move(metrics);
  return j;
}

std::string summary_table(json const& summary) {
  std::ostringstream out;
  out << "scenario " << summary["scenario"].get<std::string>() << ", "
      << summary["seeds"].size() << " seed(s), "
      << summary["episodes_per_seed"].get<std::uint64_t>()
      << " episode(s) per seed\n\n";
  out << std::left << std::setw(36) << "metric" << std::right << std::setw(16)
      << "mean" << std::setw(14) << "sd" << "\n";
  for (auto const& [name, m] : summary["metrics"].items()) {
    out << std::left << std::setw(36) << name << std::right;
    if (m["mean"].is_null()) {
      out << std::setw(16) << "n/a" << std::setw(14) << "n/a";
    } else {
      out << std::fixed << std::setprecision(4) << std::setw(16)
          << m["mean"].get<double>() << std::setw(14) << m["sd"].get<double>();
    }
    out << "\n";
  }
  return out.str();
}

json manifest(run_config const& cfg) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0')
       << scenario_hash(cfg.scenario_);
  json j;
  j["tool"] = "railpricing";
  j["version"] = kToolVersion;
  j["scenario"] = cfg.scenario_.name_;
  j["scenario_hash"] = hash.str();
  j["policy"] = cfg.policy_.str();
  j["mode"] = to_string(cfg.mode_);
  j["action_mode"] = to_string(cfg.action_mode_);
  j["seeds"] = cfg.seeds_;
  j["episodes_per_seed"] = cfg.episodes_;
  j["parallel"] = cfg.parallel_;
  json inst = json::object();
  for (auto const seed : cfg.seeds_) {
    auto v = json::array();
    for (auto r = 0U; r != cfg.parallel_; ++r) {
      v.push_back(instance_seed(seed, r, cfg.mode_));
    }
    inst[std::to_string(seed)] = std::move(v);
  }
  j["instance_seeds"] = std::move(inst);
  j["q_learning"] = {{"learning_rate", cfg.q_.learning_rate_},
                     {"gamma", cfg.q_.gamma_},
                     {"epsilon_start", cfg.q_.epsilon_start_},
                     {"epsilon_end", cfg.q_.epsilon_end_},
                     {"decay_episodes", cfg.q_.decay_episodes_}};
  j["args"] = cfg.args_;
  return j;
}

json q_tables_to_json(std::map<std::string, q_table_learner> const& tables) {
  json agents = json::object();
  for (auto const& [id, t] : tables) {
    agents[id] = t.to_json();
  }
  return {{"schema_version", 1}, {"agents", std::move(agents)}};
}

std::map<std::string, q_table_learner> q_tables_from_json(json const& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j["schema_version"] != 1 || !j.contains("agents") ||
      !j["agents"].is_object()) {
    throw validation_error{"$", "expected a q-table file with schema_version 1"};
  }
  std::map<std::string, q_table_learner> out;
  for (auto const& [id, t] : j["agents"].items()) {
    out.emplace(id, q_table_learner::from_json(t));
  }
  return out;
}

void write_outputs(run_config const& cfg, run_result const& res,
                   std::filesystem::path const& dir) {
  std::filesystem::create_directories(dir);
  auto const write = [&](std::string const& name, std::string const& text) {
    std::ofstream out{dir / name, std::ios::binary | std::ios::trunc};
    if (!out) {
      throw error{"cannot write " + (dir / name).string()};
    }
    out << text;
  };
  auto const& s = cfg.scenario_;

  std::string episodes;
  for (auto const& sr : res.seeds_) {
    for (auto e = 0U; e != sr.reports_.size(); ++e) {
      json line;
      line["seed"] = sr.seed_;
      line["episode"] = e;
      line["instance"] = e % cfg.parallel_;
      line["report"] = sr.reports_[e].to_json(s);
      episodes += line.dump() + "\n";
    }
  }
  write("episodes.jsonl", episodes);
  write("summary.json", res.summary_.dump(2) + "\n");
  write("summary.txt", summary_table(res.summary_));
  write("manifest.json", manifest(cfg).dump(2) + "\n");

  json dist = json::object();
  for (auto const& sr : res.seeds_) {
    if (!sr.trace_.empty()) {
      std::string t;
      for (auto const& l : sr.trace_) {
        t += l + "\n";
      }
      write("trace_seed" + std::to_string(sr.seed_) + ".jsonl", t);
    }
    if (!sr.q_tables_.empty()) {
      write("q_table_seed" + std::to_string(sr.seed_) + ".json",
            q_tables_to_json(sr.q_tables_).dump() + "\n");
    }
    if (sr.distribution_.has_value()) {
      dist[std::to_string(sr.seed_)] = sr.distribution_->to_json();
    }
  }
  if (!dist.empty()) {
    write("policy_distribution.json", dist.dump(2) + "\n");
  }
}

}  // namespace railpricing
