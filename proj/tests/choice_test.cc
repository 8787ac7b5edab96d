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

#include "fixtures.h"
#include "railpricing/choice.h"

using namespace railpricing;
using fixtures::json;

namespace {

json no_noise(json t) {
  t["noise"] = {{"distribution", "none"}};
  return t;
}

// A -> B served by one service per price, departing 08:00, 09:00, ...
scenario direct_services(std::vector<double> const& prices, json type,
                         int capacity = 100) {
  fixtures::network n;
  n.stations_ = {"A", "B"};
  for (auto i = 0U; i != prices.size(); ++i) {
    auto const h = std::to_string(8 + i);
    n.services_.push_back({"s" + std::to_string(i + 1U),
                           "op" + std::to_string(i + 1U),
                           {"A", "B"},
                           {(h.size() == 1 ? "0" : "") + h + ":00",
                            (h.size() == 1 ? "0" : "") + h + ":30"},
                           {},
                           prices[i]});
  }
  n.markets_ = {{"A", "B", 1.0}};
  n.types_ = {std::move(type)};
  n.capacity_ = capacity;
  return n.build();
}

passenger traveller(scenario const& s) {
  passenger p;
  p.type_ = passenger_type_idx{0};
  p.market_ = market_idx{0};
  p.desired_travel_date_ = s.first_travel_date();
  p.purchase_day_ = 1;
  p.preferred_departure_ = 8 * 60;
  p.preferred_arrival_ = 9 * 60;
  return p;
}

struct fixture {
  scenario s_;
  supply_state sup_{s_};
  passenger p_ = traveller(s_);
  std::vector<journey> js_ = enumerate_journeys(
      s_, sup_, market_idx{0}, s_.first_travel_date(), 5, 0);

  explicit fixture(scenario s) : s_{std::move(s)} {}
};

}  // namespace

TEST_CASE("seat screening") {
  fixture f{direct_services({50.0}, no_noise(fixtures::plain_type(2.0)), 1)};
  auto const& type = f.s_.passenger_types_[0];
  rng r{1U};
  CHECK(seat_screening_utility(type, f.sup_, 0, 0, r) == 2.0);
  f.sup_.sell_ticket(0, 0);
  CHECK(seat_screening_utility(type, f.sup_, 0, 0, r) == kNoUtility);
}

TEST_CASE("best seat per leg") {
  auto n = fixtures::network{};
  n.stations_ = {"A", "B"};
  n.services_ = {{"s1", "op1", {"A", "B"}, {"08:00", "08:30"}, {}, 50.0}};
  n.markets_ = {{"A", "B", 1.0}};
  auto t = no_noise(fixtures::plain_type(1.0));
  t["seat_utility"]["first"] = 3.0;
  n.types_ = {t};
  auto doc = n.to_json();
  doc["seat_classes"] = {"standard", "first"};
  doc["rolling_stock"][0]["capacity"]["first"] = 1;
  doc["services"][0]["prices"].push_back(
      {{"origin", "A"}, {"destination", "B"}, {"seat", "first"}, {"price", 80}});
  auto const s = load_scenario(doc.dump());
  supply_state sup{s};
  auto const js =
      enumerate_journeys(s, sup, market_idx{0}, s.first_travel_date(), 5, 0);
  REQUIRE(js.size() == 1U);
  auto const& type = s.passenger_types_[0];
  rng r{1U};
  auto const seats = screen_seats(type, js[0], sup, r);
  REQUIRE(seats.has_value());
  CHECK(*seats == std::vector<std::size_t>{1U});

  // once first class is gone the standard seat is the best left
  sup.sell_ticket(0, 1);
  CHECK(*screen_seats(type, js[0], sup, r) == std::vector<std::size_t>{0U});
  for (auto i = 0; i != 100; ++i) {
    sup.sell_ticket(0, 0);
  }
  CHECK_FALSE(screen_seats(type, js[0], sup, r).has_value());
}

TEST_CASE("utility composition") {
  SUBCASE("penalty-free journey equals its seat term") {
    fixture f{direct_services({50.0}, no_noise(fixtures::plain_type(5.0)))};
    rng r{1U};
    std::vector<std::size_t> const seats{0U};
    auto const u = journey_utility(f.s_, f.p_, f.js_[0], seats, f.sup_, r);
    CHECK(u.total_ == 5.0);
    CHECK(u.tsp_seat_ == 5.0);
  }
  SUBCASE("linear price sensitivity") {
    fixture f{
        direct_services({50.0}, no_noise(fixtures::plain_type(10.0, 0.1)))};
    rng r{1U};
    std::vector<std::size_t> const seats{0U};
    auto const u = journey_utility(f.s_, f.p_, f.js_[0], seats, f.sup_, r);
    CHECK(u.price_ == doctest::Approx(5.0));
    CHECK(u.total_ == doctest::Approx(5.0));
  }
  SUBCASE("sold-out leg") {
    fixture f{direct_services({50.0}, no_noise(fixtures::plain_type(5.0)), 1)};
    f.sup_.sell_ticket(0, 0);
    rng r{1U};
    std::vector<std::size_t> const seats{0U};
    auto const u = journey_utility(f.s_, f.p_, f.js_[0], seats, f.sup_, r);
    CHECK(u.total_ == kNoUtility);
    CHECK_FALSE(u.feasible());
  }
}

TEST_CASE("multi-leg journeys average the operator and seat terms") {
  auto n = fixtures::example_network();
  auto t = no_noise(fixtures::plain_type(4.0));
  t["tsp_affinity"] = {{"op2", 2.0}, {"op3", 6.0}};
  t["transfer_count_penalty"] = 1.5;
  t["transfer_time_penalty"] = {{"linear", 0.1}};
  t["travel_time_penalty"] = {{"linear", 0.01}};
  t["arrival_penalty"] = {{"linear", 0.02}};
  t["departure_penalty"] = {{"linear", 0.03}};
  n.types_ = {t};
  auto const s = n.build();
  supply_state sup{s};
  auto p = traveller(s);
  p.preferred_departure_ = 7 * 60 + 50;
  p.preferred_arrival_ = 9 * 60 + 40;
  auto const js = enumerate_journeys(s, sup, market_idx{0},
                                     s.first_travel_date(), 5, 2);
  // second in order: s2 then s3, 08:00 -> 09:30
  auto const& j2 = js[1];
  REQUIRE(j2.legs_.size() == 2U);
  rng r{1U};
  std::vector<std::size_t> const seats{0U, 0U};
  auto const u = journey_utility(s, p, j2, seats, sup, r);
  CHECK(u.tsp_seat_ == doctest::Approx(((2.0 + 4.0) + (6.0 + 4.0)) / 2.0));
  CHECK(u.departure_ == doctest::Approx(0.03 * 10));
  CHECK(u.arrival_ == doctest::Approx(0.02 * 10));
  CHECK(u.travel_time_ == doctest::Approx(0.01 * 90));
  CHECK(u.transfer_time_ == doctest::Approx(0.1 * 15));
  CHECK(u.transfer_count_ == doctest::Approx(1.5));
  CHECK(u.total_ == doctest::Approx(8.0 - 0.3 - 0.2 - 0.9 - 1.5 - 1.5));
}

TEST_CASE("opt-out when no journey has positive utility") {
  SUBCASE("negative utilities") {
    fixture f{direct_services({50.0, 60.0},
                              no_noise(fixtures::plain_type(1.0, 0.1)))};
    rng r{1U};
    auto const c = choose_journey(f.s_, f.p_, f.js_, f.sup_, r);
    CHECK_FALSE(c.travels());
    CHECK(c.seats_.empty());
  }
  SUBCASE("zero utility is not enough") {
    fixture f{
        direct_services({50.0}, no_noise(fixtures::plain_type(5.0, 0.1)))};
    rng r{1U};
    CHECK_FALSE(choose_journey(f.s_, f.p_, f.js_, f.sup_, r).travels());
  }
  SUBCASE("no candidates") {
    fixture f{direct_services({50.0}, no_noise(fixtures::plain_type(5.0)))};
    rng r{1U};
    CHECK_FALSE(
        choose_journey(f.s_, f.p_, std::span<journey const>{}, f.sup_, r)
            .travels());
  }
}

TEST_CASE("best journey wins and ties keep the first") {
  fixture f{direct_services({30.0, 20.0, 20.0},
                            no_noise(fixtures::plain_type(10.0, 0.1)))};
  rng r{1U};
  auto const before = f.sup_.ledger().size();
  auto const c = choose_journey(f.s_, f.p_, f.js_, f.sup_, r);
  REQUIRE(c.travels());
  CHECK(*c.journey_ == 1U);
  CHECK(c.utility_.total_ == doctest::Approx(8.0));
  CHECK(f.sup_.ledger().size() == before);
  CHECK(f.sup_.instance(1).cells_[0].sold_ == 0U);
}

TEST_CASE("sold-out journeys are never chosen") {
  fixture f{direct_services({10.0, 90.0}, fixtures::plain_type(20.0, 0.1), 1)};
  f.sup_.sell_ticket(0, 0);
  rng r{3U};
  for (auto i = 0; i != 200; ++i) {
    auto const c = choose_journey(f.s_, f.p_, f.js_, f.sup_, r);
    CHECK((!c.travels() || *c.journey_ == 1U));
  }
}

TEST_CASE("raising a price never helps that journey") {
  rng gen{17U};
  for (auto rep = 0; rep != 200; ++rep) {
    auto const cents = [&](double lo, double hi) {
      return std::round(gen.uniform(lo, hi) * 100.0) / 100.0;
    };
    auto const base = cents(5.0, 80.0);
    auto const other = cents(5.0, 80.0);
    auto const seed = gen.next_u64();
    fixture lo{direct_services({base, other}, fixtures::plain_type(10.0, 0.1))};
    fixture hi{direct_services({base + cents(0.0, 40.0), other},
                               fixtures::plain_type(10.0, 0.1))};
    rng a{seed};
    rng b{seed};
    std::vector<std::size_t> const seats{0U};
    auto const ul = journey_utility(lo.s_, lo.p_, lo.js_[0], seats, lo.sup_, a);
    auto const uh = journey_utility(hi.s_, hi.p_, hi.js_[0], seats, hi.sup_, b);
    CHECK(uh.total_ <= ul.total_);

    rng c{seed};
    rng d{seed};
    auto const cl = choose_journey(lo.s_, lo.p_, lo.js_, lo.sup_, c);
    auto const ch = choose_journey(hi.s_, hi.p_, hi.js_, hi.sup_, d);
    if (!(cl.travels() && *cl.journey_ == 0U)) {
      CHECK_FALSE((ch.travels() && *ch.journey_ == 0U));
    }
  }
}

TEST_CASE("choice is a pure function of the rng state") {
  fixture f{direct_services({30.0, 40.0, 50.0}, fixtures::plain_type(8.0, 0.1))};
  for (auto seed = 0U; seed != 50U; ++seed) {
    rng a{seed};
    rng b{seed};
    auto const x = choose_journey(f.s_, f.p_, f.js_, f.sup_, a);
    auto const y = choose_journey(f.s_, f.p_, f.js_, f.sup_, b);
    CHECK(x.journey_ == y.journey_);
    CHECK(x.seats_ == y.seats_);
    CHECK(x.utility_.total_ == y.utility_.total_);
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("gumbel noise yields logit frequencies") {
  std::vector<double> const prices{40.0, 50.0, 60.0};
  auto constexpr kScale = 2.0;
  fixture f{direct_services(prices, fixtures::plain_type(30.0, 0.1, kScale))};
  std::vector<double> v;
  auto z = 0.0;
  for (auto const p : prices) {
    v.push_back(std::exp((30.0 - 0.1 * p) / kScale));
    z += v.back();
  }
  std::vector<double> counts(3, 0.0);
  auto travelled = 0.0;
  rng r{2026U};
  for (auto i = 0; i != 100000; ++i) {
    auto const c = choose_journey(f.s_, f.p_, f.js_, f.sup_, r);
    if (c.travels()) {
      counts[*c.journey_] += 1.0;
      travelled += 1.0;
    }
  }
  for (auto k = 0U; k != 3U; ++k) {
    CHECK(std::abs(counts[k] / travelled - v[k] / z) < 0.01);
  }
}
