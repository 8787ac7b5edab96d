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

#include "railpricing/protocol.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

namespace railpricing {

using json = nlohmann::ordered_json;

namespace {

struct protocol_error {
  std::string code_;
  std::string message_;
};

[[noreturn]] void fail(std::string code, std::string message) {
  throw protocol_error{std::move(code), std::move(message)};
}

json error_reply(std::string const& code, std::string const& message) {
  return {{"type", "error"},
          {"protocol_version", kProtocolVersion},
          {"code", code},
          {"message", message}};
}

}  // namespace

protocol_handler::protocol_handler(scenario s, action_mode default_mode)
    : scenario_{std::move(s)}, default_mode_{default_mode} {
  validate(scenario_);
}

std::string protocol_handler::line_too_long() const {
  return error_reply("line_too_long",
                     "request exceeds " + std::to_string(kMaxLineBytes) +
                         " bytes")
      .dump();
}

std::string protocol_handler::handle(std::string_view line) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1U);
  }
  if (line.size() > kMaxLineBytes) {
    return line_too_long();
  }
  json request;
  try {
    request = json::parse(line);
  } catch (json::parse_error const& e) {
    return error_reply("malformed_request", std::string{"invalid JSON: "} + e.what())
        .dump();
  }
  json reply;
  try {
    reply = dispatch(request);
  } catch (protocol_error const& e) {
    reply = error_reply(e.code_, e.message_);
  } catch (already_terminal const& e) {
    reply = error_reply("wrong_phase", e.what());
  } catch (malformed_action const& e) {
    reply = error_reply("malformed_action", e.what());
  } catch (unknown_agent const& e) {
    reply = error_reply("malformed_action", e.what());
  } catch (std::exception const& e) {
    reply = error_reply("internal_error", e.what());
  }
  if (request.is_object() && request.contains("id")) {
    reply["id"] = request["id"];
  }
  return reply.dump();
}

pricing_env& protocol_handler::session_of(json const& request) {
  if (!request.contains("session") || !request["session"].is_string()) {
    fail("malformed_request", "missing \"session\"");
  }
  auto const id = request["session"].get<std::string>();
  auto const it = sessions_.find(id);
  if (it == end(sessions_)) {
    fail("unknown_session", "unknown session \"" + id + "\"");
  }
  return *it->second;
}

json protocol_handler::spaces(pricing_env const& env) const {
  json actions = json::object();
  json observations = json::object();
  for (auto a = 0U; a != env.n_agents(); ++a) {
    auto const& id = scenario_.agents_[a].id_;
    actions[id] = env.get_action_space(agent_idx{a}).to_json();
    observations[id] = env.observation_space(agent_idx{a});
  }
  return {{"action_spaces", std::move(actions)},
          {"observation_spaces", std::move(observations)}};
}

json protocol_handler::observations(
    pricing_env const& env, std::vector<agent_observation> const& obs) const {
  json o = json::object();
  for (auto a = 0U; a != obs.size(); ++a) {
    o[scenario_.agents_[a].id_] = obs[a].to_json(env.get_scenario());
  }
  return o;
}

json protocol_handler::dispatch(json const& request) {
  if (!request.is_object()) {
    fail("malformed_request", "request must be a JSON object");
  }
  if (!request.contains("type") || !request["type"].is_string()) {
    fail("malformed_request", "missing \"type\"");
  }
  if (request.contains("protocol_version") &&
      request["protocol_version"] != kProtocolVersion) {
    fail("version_mismatch", "server speaks protocol version " +
                                 std::to_string(kProtocolVersion));
  }
  auto const type = request["type"].get<std::string>();
  json reply;
  reply["type"] = type;
  reply["protocol_version"] = kProtocolVersion;

  if (type == "hello") {
    auto mode = default_mode_;
    if (request.contains("action_mode")) {
      auto const& m = request["action_mode"];
      if (m == "continuous") {
        mode = action_mode::kContinuous;
      } else if (m == "discrete") {
        mode = action_mode::kDiscrete;
      } else {
        fail("malformed_request",
             "action_mode must be \"continuous\" or \"discrete\"");
      }
    }
    auto const id = std::to_string(next_session_++);
    auto env = std::make_unique<pricing_env>(scenario_, mode);
    reply["session"] = id;
    reply["scenario"] = scenario_.name_;
    reply["action_mode"] = to_string(mode);
    reply["horizon_days"] = env->horizon();
    json agents = json::array();
    for (auto const& a : scenario_.agents_) {
      agents.push_back(a.id_);
    }
    reply["agents"] = std::move(agents);
    auto const sp = spaces(*env);
    for (auto const& [k, v] : sp.items()) {
      reply[k] = v;
    }
    sessions_.emplace(id, std::move(env));
    return reply;
  }

  auto& env = session_of(request);
  reply["session"] = request["session"];

  if (type == "spaces") {
    auto const sp = spaces(env);
    for (auto const& [k, v] : sp.items()) {
      reply[k] = v;
    }
  } else if (type == "reset") {
    std::vector<agent_observation> obs;
    if (request.contains("seed")) {
      auto const& seed = request["seed"];
      if (!seed.is_number_unsigned()) {
        fail("malformed_request", "seed must be a non-negative integer");
      }
      obs = env.reset(seed.get<std::uint64_t>());
    } else {
      obs = env.reset();
    }
    reply["day"] = env.day();
    reply["observations"] = observations(env, obs);
  } else if (type == "step") {
    if (!env.started()) {
      fail("wrong_phase", "step before reset");
    }
    if (env.terminal()) {
      fail("wrong_phase", "episode is over, send reset");
    }
    if (!request.contains("actions") || !request["actions"].is_object()) {
      fail("malformed_action", "\"actions\" must map agent ids to vectors");
    }
    auto const& actions = request["actions"];
    for (auto const& [id, v] : actions.items()) {
      if (!scenario_.find_agent(id).has_value()) {
        fail("malformed_action", "unknown agent \"" + id + "\"");
      }
    }
    joint_action ja;
    for (auto const& a : scenario_.agents_) {
      if (!actions.contains(a.id_)) {
        fail("malformed_action", "missing action for agent \"" + a.id_ + "\"");
      }
      auto const& v = actions[a.id_];
      if (!v.is_array()) {
        fail("malformed_action",
             "action for agent \"" + a.id_ + "\" must be an array");
      }
      std::vector<double> x;
      for (auto const& e : v) {
        if (!e.is_number()) {
          fail("malformed_action",
               "action for agent \"" + a.id_ + "\" must contain numbers");
        }
        x.push_back(e.get<double>());
      }
      ja.per_agent_.push_back(std::move(x));
    }
    auto const r = env.step(ja);
    auto const out = r.to_json(scenario_);
    for (auto const& [k, v] : out.items()) {
      reply[k] = v;
    }
  } else if (type == "close") {
    sessions_.erase(request["session"].get<std::string>());
  } else {
    fail("malformed_request", "unknown request type \"" + type + "\"");
  }
  return reply;
}

void line_splitter::feed(std::string_view bytes, std::vector<line>& out) {
  for (auto const c : bytes) {
    if (c == '\n') {
      if (overflow_) {
        out.push_back({{}, true});
      } else if (buf_.find_first_not_of(" \t\r") != std::string::npos) {
        out.push_back({std::move(buf_), false});
      }
      buf_.clear();
      overflow_ = false;
    } else if (!overflow_) {
      if (buf_.size() >= kMaxLineBytes + 1U) {
        overflow_ = true;
        buf_.clear();
        buf_.shrink_to_fit();
      } else {
        buf_.push_back(c);
      }
    }
  }
}

void serve_stream(protocol_handler& h, std::istream& in, std::ostream& out) {
  line_splitter split;
  std::vector<line_splitter::line> lines;
  std::string chunk(4096, '\0');
  while (in) {
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    auto const n = in.gcount();
    if (n <= 0) {
      break;
    }
    lines.clear();
    split.feed(std::string_view{chunk.data(), static_cast<std::size_t>(n)},
               lines);
    for (auto const& l : lines) {
      out << (l.too_long_ ? h.line_too_long() : h.handle(l.text_)) << '\n';
    }
    out.flush();
  }
}

tcp_server::tcp_server(scenario s, action_mode default_mode,
                       std::string address, std::uint16_t port)
    : scenario_{std::move(s)}, default_mode_{default_mode} {
  validate(scenario_);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw error{std::string{"socket: "} + std::strerror(errno)};
  }
  auto const yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw error{"invalid bind address " + address};
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) !=
          0 ||
      ::listen(listen_fd_, 16) != 0) {
    auto const msg = std::string{std::strerror(errno)};
    ::close(listen_fd_);
    throw error{"cannot listen on " + address + ":" + std::to_string(port) +
                ": " + msg};
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

tcp_server::~tcp_server() {
  stop();
  for (auto& t : connections_) {
    if (t.joinable()) {
      t.join();
    }
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
  }
}

void tcp_server::run() {
  while (!stopping_) {
    auto const fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) {
        break;
      }
      if (errno == EINTR) {
        continue;
      }
      throw error{std::string{"accept: "} + std::strerror(errno)};
    }
    std::lock_guard lock{mutex_};
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    connections_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void tcp_server::stop() {
  std::lock_guard lock{mutex_};
  if (stopping_.exchange(true)) {
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  for (auto const fd : open_fds_) {
    ::shutdown(fd, SHUT_RDWR);
  }
}

void tcp_server::serve_connection(int fd) {
  auto const send_all = [&](std::string const& s) {
    auto off = std::size_t{0U};
    while (off < s.size()) {
      auto const n = ::send(fd, s.data() + off, s.size() - off, MSG_NOSIGNAL);
      if (n <= 0) {
        if (n < 0 && errno == EINTR) {
          continue;
        }
        return false;
      }
      off += static_cast<std::size_t>(n);
    }
    return true;
  };

  try {
    protocol_handler h{scenario_, default_mode_};
    line_splitter split;
    std::vector<line_splitter::line> lines;
    std::string chunk(4096, '\0');
    auto open = true;
    while (open) {
      auto const n = ::recv(fd, chunk.data(), chunk.size(), 0);
      if (n < 0 && errno == EINTR) {
        continue;
      }
      if (n <= 0) {
        break;
      }
      lines.clear();
      split.feed(std::string_view{chunk.data(), static_cast<std::size_t>(n)},
                 lines);
      for (auto const& l : lines) {
        if (!send_all((l.too_long_ ? h.line_too_long() : h.handle(l.text_)) +
                      "\n")) {
          open = false;
          break;
        }
      }
    }
  } catch (std::exception const&) {
    // Transport failures only end this connection.
  }

  std::lock_guard lock{mutex_};
  open_fds_.erase(std::remove(begin(open_fds_), end(open_fds_), fd),
                  end(open_fds_));
  ::close(fd);
}

}  // namespace railpricing
