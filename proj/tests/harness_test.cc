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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "railpricing/harness.h"

using namespace railpricing;
namespace fs = std::filesystem;

namespace {

std::string slurp(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct temp_dir {
  fs::path path_;
  explicit temp_dir(std::string const& name)
      : path_{fs::temp_directory_path() / ("railpricing_" + name)} {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~temp_dir() { fs::remove_all(path_); }
};

run_config business_random() {
  run_config cfg;
  cfg.scenario_ = preset("business");
  cfg.seeds_ = {0U, 43U, 71U};
  cfg.episodes_ = 4U;
  cfg.parallel_ = 2U;
  return cfg;
}

}  // namespace

TEST_CASE("instance seeds") {
  CHECK(instance_seed(43U, 0U, run_mode::kTrain) == 43U);
  CHECK(instance_seed(43U, 2U, run_mode::kTrain) == 2043U);
  CHECK(instance_seed(43U, 2U, run_mode::kEval) == 200043U);
}

TEST_CASE("policy specs") {
  CHECK(policy_spec::parse("random").kind_ == policy_spec::kind::kRandom);
  auto const s = policy_spec::parse("scripted:plan.json");
  CHECK(s.kind_ == policy_spec::kind::kScripted);
  CHECK(s.file_ == "plan.json");
  CHECK(policy_spec::parse("tabular-q").kind_ == policy_spec::kind::kTabularQ);
  CHECK(policy_spec::parse("tabular-q:q.json").file_ == "q.json");
  CHECK(policy_spec::parse("scripted:x").str() == "scripted:x");
  CHECK_THROWS(policy_spec::parse("maddpg"));
  CHECK_THROWS(policy_spec::parse("scripted:"));
}

TEST_CASE("three-seed report") {
  auto const cfg = business_random();
  auto const res = run(cfg);
  REQUIRE(res.seeds_.size() == 3U);
  for (auto const& sr : res.seeds_) {
    CHECK(sr.reports_.size() == 4U);
  }
  auto const& m = res.summary_["metrics"];
  CHECK(m["total_profit"]["n_seeds"] == 3);
  CHECK(m["total_profit"]["mean"].get<double>() > 0.0);
  CHECK(m["total_profit"]["sd"].get<double>() >= 0.0);
  CHECK(m.contains("profit.agent_1"));
  CHECK(m.contains("percent_travelling.business"));

  // mean and sd recomputed from the per-seed episode means
  std::vector<double> per_seed;
  for (auto const& sr : res.seeds_) {
    auto sum = 0.0;
    for (auto const& r : sr.reports_) {
      for (auto const& p : r.profit_) {
        sum += p.units();
      }
    }
    per_seed.push_back(sum / static_cast<double>(sr.reports_.size()));
  }
  auto const mean = (per_seed[0] + per_seed[1] + per_seed[2]) / 3.0;
  auto ss = 0.0;
  for (auto const v : per_seed) {
    ss += (v - mean) * (v - mean);
  }
  CHECK(m["total_profit"]["mean"].get<double>() == doctest::Approx(mean));
  CHECK(m["total_profit"]["sd"].get<double>() ==
        doctest::Approx(std::sqrt(ss / 2.0)));
  CHECK_FALSE(summary_table(res.summary_).empty());
}

TEST_CASE("thread count does not change results") {
  auto cfg = business_random();
  cfg.parallel_ = 4U;
  cfg.threads_ = 1U;
  auto const a = run(cfg);
  cfg.threads_ = 4U;
  auto const b = run(cfg);
  CHECK(a.summary_.dump() == b.summary_.dump());
  for (auto i = 0U; i != a.seeds_.size(); ++i) {
    for (auto e = 0U; e != a.seeds_[i].reports_.size(); ++e) {
      CHECK(a.seeds_[i].reports_[e].to_json(cfg.scenario_) ==
            b.seeds_[i].reports_[e].to_json(cfg.scenario_));
    }
  }
}

TEST_CASE("identical invocations write identical files") {
  temp_dir one{"one"};
  temp_dir two{"two"};
  auto cfg = business_random();
  cfg.action_mode_ = action_mode::kDiscrete;
  cfg.args_ = {"run", "--scenario", "business"};
  write_outputs(cfg, run(cfg), one.path_);
  cfg.threads_ = 3U;
  write_outputs(cfg, run(cfg), two.path_);
  for (auto const* f : {"episodes.jsonl", "summary.json", "summary.txt",
                        "manifest.json", "policy_distribution.json"}) {
    REQUIRE(fs::exists(one.path_ / f));
    CHECK(slurp(one.path_ / f) == slurp(two.path_ / f));
  }
  CHECK_FALSE(fs::exists(one.path_ / "trace_seed0.jsonl"));
}

TEST_CASE("single-episode runs write a trace") {
  temp_dir dir{"trace"};
  run_config cfg;
  cfg.scenario_ = preset("business");
  cfg.seeds_ = {7U};
  auto const res = run(cfg);
  REQUIRE(res.seeds_[0].trace_.size() ==
          static_cast<std::size_t>(cfg.scenario_.episode_.horizon_days_) + 1U);
  write_outputs(cfg, res, dir.path_);
  std::ifstream in{dir.path_ / "trace_seed7.jsonl"};
  std::string line;
  auto lines = 0;
  while (std::getline(in, line)) {
    CHECK_NOTHROW(nlohmann::ordered_json::parse(line));
    ++lines;
  }
  CHECK(lines == 6);
  auto const man = nlohmann::ordered_json::parse(slurp(dir.path_ / "manifest.json"));
  CHECK(man["seeds"] == nlohmann::ordered_json::array({7}));
  CHECK(man["scenario_hash"].get<std::string>().size() == 16U);
}

TEST_CASE("training then greedy evaluation") {
  run_config cfg;
  cfg.scenario_ = preset("business");
  cfg.policy_ = policy_spec::parse("tabular-q");
  cfg.action_mode_ = action_mode::kDiscrete;
  cfg.mode_ = run_mode::kTrain;
  cfg.episodes_ = 20U;
  cfg.parallel_ = 2U;
  auto const trained = run(cfg);
  REQUIRE(trained.seeds_[0].q_tables_.size() == 3U);

  auto const doc = q_tables_to_json(trained.seeds_[0].q_tables_);
  auto const tables = q_tables_from_json(doc);
  CHECK(q_tables_to_json(tables) == doc);

  cfg.mode_ = run_mode::kEval;
  cfg.q_tables_ = tables;
  auto const a = run(cfg);
  auto const b = run(cfg);
  CHECK(a.summary_ == b.summary_);

  // tabular-q needs the discrete action space
  cfg.action_mode_ = action_mode::kContinuous;
  CHECK_THROWS(run(cfg));
}

TEST_CASE("scripted runs and error attribution") {
  run_config cfg;
  cfg.scenario_ = preset("business");
  cfg.policy_ = policy_spec::parse("scripted:inline");
  cfg.script_ = std::map<std::string, std::vector<std::vector<double>>>{
      {"agent_1", {{0.0}}}, {"agent_2", {{0.0, 0.0}}}, {"agent_3", {{0.0, 0.0}}}};
  CHECK_NOTHROW(run(cfg));

  (*cfg.script_)["agent_2"] = {{0.0, 0.0, 0.0}};
  try {
    run(cfg);
    FAIL("expected an error");
  } catch (error const& e) {
    CHECK(std::string{e.what()}.find("seed 0") != std::string::npos);
  }

  cfg.parallel_ = 0U;
  CHECK_THROWS_AS(run(cfg), out_of_range);
}
