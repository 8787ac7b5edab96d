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

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "railpricing/env.h"
#include "railpricing/scenario.h"

namespace railpricing {

constexpr int kProtocolVersion = 1;
constexpr std::size_t kMaxLineBytes = 1U << 20U;

// Request handler of one connection. A connection may open several
// sessions with "hello"; each session owns its own environment.
class protocol_handler {
public:
  protocol_handler(scenario, action_mode default_mode);

  // One request line in, one reply line out (without the newline).
  std::string handle(std::string_view line);

  // Reply sent for a line longer than kMaxLineBytes.
  std::string line_too_long() const;

  std::size_t open_sessions() const { return sessions_.size(); }

private:
  nlohmann::ordered_json dispatch(nlohmann::ordered_json const& request);
  pricing_env& session_of(nlohmann::ordered_json const& request);
  nlohmann::ordered_json spaces(pricing_env const&) const;
  nlohmann::ordered_json observations(
      pricing_env const&, std::vector<agent_observation> const&) const;

  scenario scenario_;
  action_mode default_mode_;
  std::uint64_t next_session_{1U};
  std::map<std::string, std::unique_ptr<pricing_env>> sessions_;
};

// Splits a byte stream into lines, replacing over-long lines by an empty
// marker and dropping blank ones. Used by both transports.
class line_splitter {
public:
  struct line {
    std::string text_;
    bool too_long_{false};
  };

  void feed(std::string_view bytes, std::vector<line>& out);

private:
  std::string buf_;
  bool overflow_{false};
};

// Serves one connection over a pair of streams until end of input.
void serve_stream(protocol_handler&, std::istream& in, std::ostream& out);

// Listens on `address:port` (port 0 picks a free one); one thread and one
// handler per connection.
class tcp_server {
public:
  tcp_server(scenario, action_mode default_mode, std::string address,
             std::uint16_t port);
  ~tcp_server();

  tcp_server(tcp_server const&) = delete;
  tcp_server& operator=(tcp_server const&) = delete;

  std::uint16_t port() const { return port_; }

  // Accepts connections until stop() is called.
  void run();
  void stop();

private:
  void serve_connection(int fd);

  scenario scenario_;
  action_mode default_mode_;
  int listen_fd_{-1};
  std::uint16_t port_{0U};
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<std::thread> connections_;
  std::vector<int> open_fds_;
};

}  // namespace railpricing
