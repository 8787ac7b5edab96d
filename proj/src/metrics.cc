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

#include "railpricing/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace railpricing {

using json = nlohmann::ordered_json;

double equality(std::span<double const> profits) {
  if (profits.size() < 2U) {
    throw degenerate_input{"equality needs at least two agents"};
  }
  auto sum = 0.0;
  for (auto const r : profits) {
    if (!std::isfinite(r) || r < 0.0) {
      throw degenerate_input{"profits must be finite and non-negative"};
    }
    sum += r;
  }
  if (sum == 0.0) {
    throw degenerate_input{"all profits are zero"};
  }
  // sum_i sum_j |R_i - R_j| = 2 sum_{i<j} |R_i - R_j|
  auto diff = 0.0;
  for (auto i = 0U; i != profits.size(); ++i) {
    for (auto j = i + 1U; j < profits.size(); ++j) {
      diff += std::abs(profits[i] - profits[j]);
    }
  }
  auto const n = static_cast<double>(profits.size());
  return 1.0 - (2.0 * diff) / (2.0 * n * sum);
}

double attention_entropy(attention_weights const& w, double epsilon) {
  if (w.empty()) {
    throw malformed_weights{"no attention heads"};
  }
  auto total = 0.0;
  for (auto k = 0U; k != w.size(); ++k) {
    if (w[k].empty()) {
      throw malformed_weights{"head " + std::to_string(k) + " has no steps"};
    }
    auto head = 0.0;
    for (auto t = 0U; t != w[k].size(); ++t) {
      auto const& a = w[k][t];
      if (a.empty()) {
        throw malformed_weights{"empty weight vector"};
      }
      auto sum = 0.0;
      auto h = 0.0;
      for (auto const x : a) {
        if (!std::isfinite(x) || x < 0.0) {
          throw malformed_weights{"negative attention weight at head " +
                                  std::to_string(k) + ", step " +
                                  std::to_string(t)};
        }
        sum += x;
        h -= x * std::log(x + epsilon);
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw malformed_weights{"weights at head " + std::to_string(k) +
                                ", step " + std::to_string(t) +
                                " do not sum to 1"};
      }
      head += std::max(h, 0.0);
    }
    total += head / static_cast<double>(w[k].size());
  }
  return total / static_cast<double>(w.size());
}

std::vector<double> attention_entropy(
    std::vector<attention_weights> const& per_agent, double epsilon) {
  std::vector<double> out;
  out.reserve(per_agent.size());
  for (auto const& w : per_agent) {
    out.push_back(attention_entropy(w, epsilon));
  }
  return out;
}

reward_normalizer::reward_normalizer(double epsilon) : epsilon_{epsilon} {
  if (!(epsilon > 0.0)) {
    throw out_of_range{"normaliser epsilon must be positive"};
  }
}

double reward_normalizer::update_and_normalize(double r) {
  ++n_;
  auto const delta = r - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (r - mean_);
  return (r - mean_) / std::sqrt(variance() + epsilon_);
}

void reward_normalizer::reset() {
  n_ = 0U;
  mean_ = 0.0;
  m2_ = 0.0;
}

double reward_normalizer::variance() const {
  return n_ == 0U ? 0.0 : m2_ / static_cast<double>(n_);
}

episode_report make_episode_report(scenario const& s,
                                   episode_log const& log) {
  if (!log.complete_) {
    throw incomplete_episode{"episode has not reached its last day"};
  }
  episode_report r;
  r.profit_ = log.profit_;
  r.generated_by_type_.assign(s.passenger_types_.size(), 0U);
  r.travelled_by_type_.assign(s.passenger_types_.size(), 0U);

  auto utility = 0.0;
  for (auto const& p : log.passengers_) {
    auto const k = p.passenger_.type_.get();
    ++r.generated_;
    ++r.generated_by_type_[k];
    if (p.travelled_) {
      ++r.travelled_;
      ++r.travelled_by_type_[k];
      utility += p.utility_;
    }
  }
  if (r.travelled_ != 0U) {
    r.mean_utility_travellers_ = utility / static_cast<double>(r.travelled_);
  }
  if (r.generated_ != 0U) {
    r.mean_utility_all_ = utility / static_cast<double>(r.generated_);
    r.percent_travelling_ = 100.0 * static_cast<double>(r.travelled_) /
                            static_cast<double>(r.generated_);
  }
  for (auto k = 0U; k != r.generated_by_type_.size(); ++k) {
    r.percent_travelling_by_type_.push_back(
        r.generated_by_type_[k] == 0U
            ? std::nullopt
            : std::optional{100.0 *
                            static_cast<double>(r.travelled_by_type_[k]) /
                            static_cast<double>(r.generated_by_type_[k])});
  }

  std::vector<double> profits;
  auto any = false;
  for (auto const& m : r.profit_) {
    profits.push_back(m.units());
    any = any || m.cents() != 0;
  }
  if (profits.size() >= 2U && any) {
    r.equality_ = equality(profits);
  }
  return r;
}

json episode_report::to_json(scenario const& s) const {
  auto const opt = [](std::optional<double> const& x) {
    return x.has_value() ? json(*x) : json(nullptr);
  };
  json j;
  json profit = json::object();
  auto total = money{};
  for (auto a = 0U; a != profit_.size(); ++a) {
    profit[s.agents_[a].id_] = profit_[a].units();
    total += profit_[a];
  }
  j["profit"] = std::move(profit);
  j["total_profit"] = total.units();
  j["passengers_generated"] = generated_;
  j["passengers_travelled"] = travelled_;
  j["percent_travelling"] = opt(percent_travelling_);
  j["mean_utility_travellers"] = opt(mean_utility_travellers_);
  j["mean_utility_all"] = opt(mean_utility_all_);
  json by_type = json::object();
  for (auto k = 0U; k != generated_by_type_.size(); ++k) {
    by_type[s.passenger_types_[k].id_] = {
        {"generated", generated_by_type_[k]},
        {"travelled", travelled_by_type_[k]},
        {"percent_travelling", opt(percent_travelling_by_type_[k])}};
  }
  j["by_type"] = std::move(by_type);
  j["equality"] = opt(equality_);
  return j;
}

}  // namespace railpricing
