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

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "railpricing/harness.h"
#include "railpricing/protocol.h"
#include "railpricing/scenario.h"

namespace rp = railpricing;

namespace {

rp::tcp_server* active_server = nullptr;

void on_signal(int) {
  if (active_server != nullptr) {
    active_server->stop();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"railpricing: multi-agent railway pricing simulator"};
  app.require_subcommand(1);

  std::string scenario_arg;

  // run
  auto* run = app.add_subcommand("run", "Run seeded batches of episodes");
  std::string policy = "random";
  std::vector<std::uint64_t> seeds{0U};
  std::uint64_t episodes = 1U;
  std::size_t parallel = 1U;
  std::size_t threads = 1U;
  std::string mode = "eval";
  std::string out_dir = "out";
  bool discrete = false;
  bool continuous = false;
  rp::q_config q;
  run->add_option("--scenario", scenario_arg, "Scenario file or preset name")
      ->required();
  run->add_option("--policy", policy,
                  "random | scripted:<file> | tabular-q[:<q-table file>]");
  run->add_option("--seeds", seeds, "Seeds, one independent run each")
      ->delimiter(',');
  run->add_option("--episodes", episodes, "Episodes per seed");
  run->add_option("--parallel", parallel, "Environment instances per seed")
      ->check(CLI::PositiveNumber);
  run->add_option("--threads", threads,
                  "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  run->add_option("--mode", mode, "train | eval")
      ->check(CLI::IsMember({"train", "eval"}));
  run->add_option("--out-dir", out_dir, "Output directory");
  auto* d = run->add_flag("--discrete", discrete, "Eleven-level action space");
  run->add_flag("--continuous", continuous, "Box action space (default)")
      ->excludes(d);
  run->add_option("--learning-rate", q.learning_rate_, "Tabular-q step size");
  run->add_option("--gamma", q.gamma_, "Tabular-q discount factor");
  run->add_option("--epsilon-start", q.epsilon_start_);
  run->add_option("--epsilon-end", q.epsilon_end_);
  run->add_option("--epsilon-decay-episodes", q.decay_episodes_);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve environments over the wire");
  std::uint16_t port = 0U;
  std::string bind = "127.0.0.1";
  bool stdio = false;
  bool serve_discrete = false;
  serve->add_option("--scenario", scenario_arg, "Scenario file or preset name")
      ->required();
  auto* p = serve->add_option("--port", port, "TCP port");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_flag("--stdio", stdio, "Serve one connection on stdin/stdout")
      ->excludes(p);
  serve->add_flag("--discrete", serve_discrete,
                  "Default sessions to the discrete action space");

  // validate
  auto* val = app.add_subcommand("validate", "Validate a scenario file");
  val->add_option("scenario", scenario_arg, "Scenario file or preset name")
      ->required();

  // preset
  auto* pre = app.add_subcommand("preset", "Print a built-in scenario");
  std::string preset_name;
  pre->add_option("name", preset_name, "business | business_student")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rp::run_config cfg;
      cfg.scenario_ = rp::load_scenario_arg(scenario_arg);
      cfg.policy_ = rp::policy_spec::parse(policy);
      cfg.seeds_ = seeds;
      cfg.episodes_ = episodes;
      cfg.parallel_ = parallel;
      cfg.threads_ = threads;
      cfg.mode_ = mode == "train" ? rp::run_mode::kTrain : rp::run_mode::kEval;
      cfg.action_mode_ =
          discrete ? rp::action_mode::kDiscrete : rp::action_mode::kContinuous;
      cfg.q_ = q;
      cfg.args_.assign(argv + 1, argv + argc);
      auto const res = rp::run(cfg);
      rp::write_outputs(cfg, res, out_dir);
      std::cout << rp::summary_table(res.summary_);
    } else if (*serve) {
      auto const s = rp::load_scenario_arg(scenario_arg);
      auto const m = serve_discrete ? rp::action_mode::kDiscrete
                                    : rp::action_mode::kContinuous;
      if (stdio) {
        rp::protocol_handler h{s, m};
        rp::serve_stream(h, std::cin, std::cout);
      } else {
        rp::tcp_server server{s, m, bind, port};
        active_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cerr << "listening on " << bind << ":" << server.port()
                  << std::endl;
        server.run();
        active_server = nullptr;
      }
    } else if (*val) {
      auto const s = rp::load_scenario_arg(scenario_arg);
      std::cout << "ok: " << s.name_ << " (" << s.agents_.size()
                << " agents, " << s.services_.size() << " services, "
                << s.markets_.size() << " markets, horizon "
                << s.episode_.horizon_days_ << " days)\n";
    } else if (*pre) {
      std::cout << rp::serialize(rp::preset(preset_name));
    }
  } catch (rp::validation_error const& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
