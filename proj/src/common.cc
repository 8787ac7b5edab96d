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

#include "railpricing/common.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace railpricing {

minutes parse_clock(std::string_view s) {
  auto const colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0U ||
      s.size() - colon != 3U) {
    throw syntax_error{"bad clock time \"" + std::string{s} +
                       "\", expected HH:MM"};
  }
  auto const digits = [&](std::string_view part) {
    int v = 0;
    for (auto const c : part) {
      if (c < '0' || c > '9') {
        throw syntax_error{"bad clock time \"" + std::string{s} + "\""};
      }
      v = v * 10 + (c - '0');
    }
    return v;
  };
  auto const h = digits(s.substr(0, colon));
  auto const m = digits(s.substr(colon + 1));
  if (m > 59 || h > 47) {
    throw syntax_error{"clock time out of range \"" + std::string{s} + "\""};
  }
  return static_cast<minutes>(h * 60 + m);
}

std::string format_clock(minutes m) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", m / 60, m % 60);
  return buf;
}

money money::from_units(double units) {
  if (!std::isfinite(units)) {
    throw out_of_range{"non-finite currency amount"};
  }
  auto const scaled = units * 100.0;
  auto const rounded = std::nearbyint(scaled);  // FE_TONEAREST: half-even
  if (std::fabs(scaled - rounded) > 1e-6 * std::max(1.0, std::fabs(scaled))) {
    throw out_of_range{"currency amount has more than two fractional digits"};
  }
  return from_cents(static_cast<std::int64_t>(rounded));
}

std::string money::str() const {
  auto const neg = cents_ < 0;
  auto const a = neg ? -cents_ : cents_;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", neg ? "-" : "",
                static_cast<long long>(a / 100), static_cast<long long>(a % 100));
  return buf;
}

}  // namespace railpricing
