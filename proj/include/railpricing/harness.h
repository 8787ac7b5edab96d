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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "railpricing/agents.h"
#include "railpricing/env.h"
#include "railpricing/metrics.h"
#include "railpricing/scenario.h"

namespace railpricing {

enum class run_mode { kTrain, kEval };

std::string_view to_string(run_mode);

struct policy_spec {
  enum class kind { kRandom, kScripted, kTabularQ } kind_{kind::kRandom};
  std::string file_;  // script, or q-table to load

  // "random", "scripted:<file>", "tabular-q" or "tabular-q:<file>".
  static policy_spec parse(std::string_view);
  std::string str() const;
};

struct run_config {
  scenario scenario_;
  policy_spec policy_;
  std::vector<std::uint64_t> seeds_{0U};
  std::uint64_t episodes_{1U};  // per seed
  std::size_t parallel_{1U};  // environment instances per seed
  std::size_t threads_{1U};  // worker threads, does not affect results
  run_mode mode_{run_mode::kEval};
  action_mode action_mode_{action_mode::kContinuous};
  q_config q_;
  // Schedules per agent id for the scripted policy, if not read from file.
  std::optional<std::map<std::string, std::vector<std::vector<double>>>>
      script_;
  // Q-tables per agent id for greedy evaluation, if not read from file.
  std::optional<std::map<std::string, q_table_learner>> q_tables_;
  std::vector<std::string> args_;  // recorded in the manifest
};

// Instance r of a seed runs on seed + r * 1000 in training and
// seed + r * 100000 in evaluation.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance, run_mode);

struct seed_result {
  std::uint64_t seed_{0U};
  std::vector<episode_report> reports_;  // in episode order
  std::vector<action_trace> actions_;  // in episode order
  std::optional<policy_distribution> distribution_;
  // Learned tables per agent id (tabular-q in training mode).
  std::map<std::string, q_table_learner> q_tables_;
  // Line-delimited trace of the only episode when episodes = parallel = 1.
  std::vector<std::string> trace_;
};

struct run_result {
  std::vector<seed_result> seeds_;
  nlohmann::ordered_json summary_;
};

// Runs every seed. Instances of one seed advance in lockstep: actions are
// chosen and learned from in instance order, steps may run on worker
// threads. Errors are rethrown as `error` naming the seed and instance.
run_result run(run_config const&);

// Mean and sample standard deviation across seeds of each seed's episode
// averages.
nlohmann::ordered_json summarize(scenario const&, std::vector<seed_result> const&);

std::string summary_table(nlohmann::ordered_json const& summary);

nlohmann::ordered_json manifest(run_config const&);

// Writes episodes.jsonl, summary.json, summary.txt, manifest.json and,
// where produced, trace_seed<S>.jsonl, q_table_seed<S>.json and
// policy_distribution.json.
void write_outputs(run_config const&, run_result const&,
                   std::filesystem::path const& out_dir);

// {"schema_version": 1, "agents": {id: q-table}}.
nlohmann::ordered_json q_tables_to_json(
    std::map<std::string, q_table_learner> const&);
std::map<std::string, q_table_learner> q_tables_from_json(
    nlohmann::ordered_json const&);

}  // namespace railpricing
