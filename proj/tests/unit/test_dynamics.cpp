// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rca/dynamics.hpp"
#include "rca/generators.hpp"
#include "rca/metrics.hpp"
#include "rca/oracle.hpp"

namespace rca {
namespace {

using test::bid;
using test::none;
using test::set;

RunConfig br_config(const Instance& inst, Mechanism mech, std::int64_t rounds,
                    std::uint64_t seed) {
  RunConfig c;
  c.instance = inst;
  c.mechanism = std::move(mech);
  c.dynamics = DynamicsKind::kBestResponse;
  c.agents.assign(inst.n(), AgentSpec{Behavior::kBestResponse, {}});
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

RunConfig cycle_config(const std::string& order, std::int64_t rounds) {
  RunConfig c = br_config(test::cycle_instance(),
                          Mechanism::ma(make_greedy_rule(4, 2)), rounds, 1);
  c.order = parse_scripted_order(order);
  return c;
}

// Other agents' bids on sets meeting `target`, among sets of size <= cap.
Value blocking_sum(const Profile& p, std::size_t i, Bundle target, int cap) {
  Value sum = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == i || p[j].is_empty() || p[j].set().size() > cap) continue;
    if (p[j].set().intersects(target)) sum += p[j].bid();
  }
  return sum;
}

std::vector<Instance> random_instances(InstanceFamily family, int count,
                                       std::vector<int> items,
                                       std::uint64_t seed) {
  GenerateSpec spec;
  spec.family = family;
  spec.instances = count;
  spec.max_agents = 6;
  spec.items = std::move(items);
  return generate_instances(spec, seed);
}

const Profile& before(const Trace& trace, std::size_t k) {
  return k == 0 ? trace.start : trace.rounds[k - 1].profile;
}

TEST_CASE("scripted order syntax") {
  const ScriptedOrder plain = parse_scripted_order("3,4,1,2,1");
  CHECK(plain.prefix.empty());
  CHECK(plain.cycle == std::vector<AgentId>{2, 3, 0, 1, 0});
  const ScriptedOrder split = parse_scripted_order("3,4|2,1");
  CHECK(split.prefix == std::vector<AgentId>{2, 3});
  CHECK(split.cycle == std::vector<AgentId>{1, 0});
  CHECK(parse_scripted_order("1|*").random_tail);
  for (const char* text : {"3,4,1,2,1", "3,4|2,1", "1|*"}) {
    CHECK(format_scripted_order(parse_scripted_order(text)) == text);
  }
  CHECK_THROWS(parse_scripted_order(""));
  CHECK_THROWS(parse_scripted_order("0,1"));
  CHECK_THROWS(parse_scripted_order("1,x"));
  CHECK_THROWS(parse_scripted_order("1|"));
}

TEST_CASE("scripted order reproduces the four-state cycle") {
  const RunConfig config = cycle_config("3,4,1,2,1|2,1", 13);
  const Trace trace = run_dynamics(config);
  const Profile start{bid("d", 6), bid("bc", 5), bid("c", 4), bid("d", 5)};
  CHECK(trace.rounds[4].profile == start);
  CHECK(trace.rounds[5].profile[1] == bid("a", 2));
  CHECK(trace.rounds[6].profile[0] == bid("ab", 4));
  CHECK(trace.rounds[7].profile[1] == bid("bc", 5));
  CHECK(trace.rounds[8].profile == start);
  CHECK(trace.rounds[12].profile == start);
  const auto cycle = detect_cycle(trace);
  REQUIRE(cycle.has_value());
  CHECK(cycle->period == 4);

  // Updater utility before and after each move: 1 -> 2, 1 -> 2, 0 -> 1, 0 -> 1.
  Evaluator eval(config.mechanism, make_agents(config));
  const std::vector<std::pair<int, int>> expect{{1, 2}, {1, 2}, {0, 1}, {0, 1}};
  for (std::size_t k = 5; k < 9; ++k) {
    const AgentId i = *trace.rounds[k].updater;
    CHECK(eval.current_utility(before(trace, k), i) == Rational(expect[k - 5].first));
    CHECK(eval.current_utility(trace.rounds[k].profile, i) == Rational(expect[k - 5].second));
  }
  CHECK_FALSE(is_fixed_point(eval, trace.rounds.back().profile));
}

TEST_CASE("no state of the cycle is an equilibrium") {
  const RunConfig config = cycle_config("3,4,1,2,1|2,1", 9);
  Evaluator eval(config.mechanism, make_agents(config));
  const Trace trace = run_dynamics(config);
  for (std::size_t k = 4; k < 9; ++k) {
    CHECK_FALSE(is_fixed_point(eval, trace.rounds[k].profile));
  }
}

TEST_CASE("scripted order with one agent updates only that agent") {
  Instance inst = test::cycle_instance();
  inst.types.resize(2);
  RunConfig c = br_config(inst, Mechanism::ma(make_greedy_rule(4, 2)), 20, 3);
  c.order = parse_scripted_order("1");
  const Trace trace = run_dynamics(c);
  for (const RoundRecord& r : trace.rounds) {
    CHECK(*r.updater == 0);
    CHECK(r.profile[1].is_empty());
  }
}

TEST_CASE("a single agent converges after one update") {
  Instance inst;
  inst.m = 3;
  inst.labels = {"a", "b", "c"};
  inst.types = {Valuation({{set("a"), 2}, {set("bc"), 7}})};
  const Trace trace = run_dynamics(br_config(inst, Mechanism::msca(3, 2), 10, 4));
  for (const RoundRecord& r : trace.rounds) CHECK(r.profile[0] == bid("bc", 7));
  CHECK(detect_cycle(trace)->period == 1);
  CHECK(last_change_round(trace) == 1);
}

TEST_CASE("detect_cycle on synthetic traces") {
  Trace novel;
  novel.start = Profile{none()};
  for (int k = 1; k <= 6; ++k) {
    RoundRecord r;
    r.round = k;
    r.profile = Profile{Declaration::single_minded(set("a"), k)};
    novel.rounds.push_back(r);
  }
  CHECK_FALSE(detect_cycle(novel).has_value());
  Trace flat = novel;
  for (auto& r : flat.rounds) r.profile = Profile{bid("a", 1)};
  CHECK(detect_cycle(flat)->period == 1);
}

TEST_CASE("runs are deterministic in the seed") {
  const auto instances = random_instances(InstanceFamily::kCa, 3, {9}, 5);
  for (const Instance& inst : instances) {
    const RunConfig c =
        br_config(inst, Mechanism::mca(9, Rational(1, 4)), 100, 8);
    const Trace a = run_dynamics(c);
    const Trace b = run_dynamics(c);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (std::size_t k = 0; k < a.rounds.size(); ++k) {
      REQUIRE(a.rounds[k].profile == b.rounds[k].profile);
      REQUIRE(a.rounds[k].coin == b.rounds[k].coin);
      REQUIRE(a.rounds[k].updater == b.rounds[k].updater);
      REQUIRE(a.rounds[k].outcome == b.rounds[k].outcome);
    }
  }
}

TEST_CASE("best-response traces: one change per round, payments replay") {
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 5, {6}, 7)) {
    const RunConfig c = br_config(inst, Mechanism::msca(6, 2), 200, 2);
    const Trace trace = run_dynamics(c);
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
      const RoundRecord& r = trace.rounds[k];
      REQUIRE(r.round == static_cast<std::int64_t>(k + 1));
      int changed = 0;
      for (int i = 0; i < inst.n(); ++i) {
        if (r.profile[i] != before(trace, k)[i]) {
          ++changed;
          REQUIRE(i == *r.updater);
        }
      }
      REQUIRE(changed <= 1);
      REQUIRE(run(c.mechanism, r.profile, r.coin) == r.outcome);
      REQUIRE(r.true_sw == social_welfare(r.outcome.allocation, inst.types));
    }
  }
}

TEST_CASE("best-response profiles stay separated from an empty start") {
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 10, {6, 8}, 9)) {
    const Mechanism mech = Mechanism::msca(inst.m, 2);
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 4));
    for (const RoundRecord& r : trace.rounds) {
      const auto sep = separated_check(r.profile, inst.types, separation_scope(mech));
      REQUIRE(std::all_of(sep.begin(), sep.end(), [](bool b) { return b; }));
    }
  }
  for (const Instance& inst : random_instances(InstanceFamily::kCa, 10, {9}, 9)) {
    const Mechanism mech = Mechanism::mca(9, Rational(1, 10));
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 4));
    for (const RoundRecord& r : trace.rounds) {
      const auto sep = separated_check(r.profile, inst.types, separation_scope(mech));
      REQUIRE(std::all_of(sep.begin(), sep.end(), [](bool b) { return b; }));
    }
  }
}

TEST_CASE("on reachable separated profiles MsCA allocates exactly the top bids") {
  const int s = 2;
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 10, {6, 8}, 11)) {
    const Mechanism mech = Mechanism::msca(inst.m, s);
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 6));
    for (const RoundRecord& r : trace.rounds) {
      for (int i = 0; i < inst.n(); ++i) {
        const Declaration& d = r.profile[i];
        if (d.is_empty()) continue;
        Value top = 0;
        for (int j = 0; j < inst.n(); ++j) {
          const Declaration& o = r.profile[j];
          if (j == i || o.is_empty() || o.set().size() > s) continue;
          if (o.set().intersects(d.set())) top = std::max(top, o.bid());
        }
        REQUIRE((r.outcome.allocation[i] == d.set()) == (d.bid() > top));
      }
    }
  }
}

TEST_CASE("welfare of reachable profiles covers a quarter of the G agents' share") {
  const int s = 2;
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 10, {6, 8}, 13)) {
    const Mechanism mech = Mechanism::msca(inst.m, s);
    const Allocation opt = optimal_allocation(inst.types, inst.m, s).allocation;
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 8));
    const GMembership g = g_membership(trace, inst.types, opt);
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
      const RoundRecord& r = trace.rounds[k];
      Rational g_share;
      for (int i = 0; i < inst.n(); ++i) {
        const Value t = inst.types[i].value_of(opt[i]);
        const bool blocked = 2 * blocking_sum(r.profile, i, opt[i], inst.m) > t;
        const bool strong = 2 * r.profile[i].bid() >= t;
        REQUIRE(g.member[i][k] == (blocked || strong));
        if (blocked || strong) g_share += t;
      }
      REQUIRE(Rational(r.declared_sw) >= g_share / (4 * (s + 1)));
    }
  }
}

TEST_CASE("best responses on reachable profiles bid at least half of A_i") {
  const int s = 2;
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 10, {6, 8}, 15)) {
    const Mechanism mech = Mechanism::msca(inst.m, s);
    const Allocation opt = optimal_allocation(inst.types, inst.m, s).allocation;
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 10));
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
      const AgentId i = *trace.rounds[k].updater;
      const Value t = inst.types[i].value_of(opt[i]);
      if (2 * blocking_sum(before(trace, k), i, opt[i], s) >= t) continue;
      REQUIRE(2 * trace.rounds[k].profile[i].bid() >= t);
    }
  }
}

TEST_CASE("grand-bundle bidders bid at least half their value when others are weak") {
  for (const Instance& inst : random_instances(InstanceFamily::kCa, 10, {9}, 17)) {
    const Mechanism mech = Mechanism::mca(9, Rational(1, 100));
    const RunConfig c = br_config(inst, mech, 300, 12);
    const Trace trace = run_dynamics(c);
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
      const AgentId i = *trace.rounds[k].updater;
      const Value t = inst.types[i].value_of(mech.grand());
      Profile without = before(trace, k);
      without[i] = Declaration::empty();
      Value others = 0;
      for (bool ignore : {false, true}) {
        const Outcome o = run(mech, without, Coin{ignore, std::nullopt});
        others = std::max(others, declared_welfare(o.allocation, without));
      }
      if (4 * others >= t) continue;
      REQUIRE(2 * trace.rounds[k].profile[i].bid() >= t);
    }
  }
}

TEST_CASE("small-set winners add between their margin and their bid") {
  for (const Instance& inst : random_instances(InstanceFamily::kCa, 10, {9, 16}, 19)) {
    const Mechanism mech = Mechanism::mca(inst.m, Rational(1, 100));
    const int k = mech.cap;
    const Trace trace = run_dynamics(br_config(inst, mech, 300, 14));
    for (const RoundRecord& r : trace.rounds) {
      const Outcome small = run_msca(r.profile, inst.m, k);
      const Value with = declared_welfare(small.allocation, r.profile);
      for (int i = 0; i < inst.n(); ++i) {
        const Declaration& d = r.profile[i];
        if (d.is_empty() || small.allocation[i] != d.set()) continue;
        Profile without = r.profile;
        without[i] = Declaration::empty();
        const Value rest =
            declared_welfare(run_msca(without, inst.m, k).allocation, without);
        REQUIRE(d.bid() - blocking_sum(r.profile, i, d.set(), k) <= with - rest);
        REQUIRE(with - rest <= d.bid());
      }
    }
  }
}

TEST_CASE("run validation") {
  RunConfig c = cycle_config("3,4,1,2,1", 10);
  c.rounds = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = cycle_config("5", 10);
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = cycle_config("1", 10);
  c.start = StartMode::kTruthful;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.mechanism.lottery = Rational(1, 10);
  CHECK_NOTHROW(validate(c));
  c = cycle_config("1", 10);
  c.dynamics = DynamicsKind::kRegret;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.order.reset();
  CHECK_THROWS_AS(validate(c), std::invalid_argument);  // best-response agents
  c.agents.assign(4, AgentSpec{Behavior::kMW, {}});
  CHECK_NOTHROW(validate(c));
  c.agents.pop_back();
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

RunConfig regret_config(const Instance& inst, Mechanism mech, std::int64_t rounds,
                        std::uint64_t seed) {
  RunConfig c = br_config(inst, std::move(mech), rounds, seed);
  c.dynamics = DynamicsKind::kRegret;
  c.agents.assign(inst.n(), AgentSpec{Behavior::kMW, {}});
  return c;
}

TEST_CASE("first regret round samples candidates uniformly") {
  const Instance inst = test::cycle_instance();
  std::vector<int> counts(3);
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    const Trace t =
        run_dynamics(regret_config(inst, Mechanism::ma(make_greedy_rule(4, 2)), 1, seed));
    const Declaration& d = t.rounds[0].profile[0];
    ++counts[d.is_empty() ? 0 : d.set() == set("d") ? 1 : 2];
  }
  for (int c : counts) CHECK(std::abs(c - 1000) < 120);
}

TEST_CASE("a lone learner settles on its best atom") {
  Instance inst;
  inst.m = 3;
  inst.labels = {"a", "b", "c"};
  inst.types = {Valuation({{set("a"), 2}, {set("bc"), 7}})};
  const Trace t =
      run_dynamics(regret_config(inst, Mechanism::ma(make_greedy_rule(3, 2)), 2000, 3));
  int best = 0;
  for (std::size_t k = 1000; k < t.rounds.size(); ++k) {
    best += t.rounds[k].profile[0] == bid("bc", 7);
  }
  CHECK(best >= 990);
  CHECK(t.feedback[0].tracked);
  CHECK(t.feedback[0].rounds == 2000);
}

TEST_CASE("regret runs with byzantine agents and FPL learners") {
  const Instance inst = test::cycle_instance();
  RunConfig c = regret_config(inst, Mechanism::ma(make_greedy_rule(4, 2)), 300, 5);
  c.agents[0].behavior = Behavior::kFPL;
  c.agents[3].behavior = Behavior::kByzantine;
  const Trace t = run_dynamics(c);
  CHECK_FALSE(t.feedback[3].tracked);
  for (const RoundRecord& r : t.rounds) {
    CHECK_FALSE(r.updater.has_value());
    REQUIRE(r.profile[3].bid() <= inst.types[3].value_of(r.profile[3].set()));
  }
}

TEST_CASE("lottery runs from a truthful start") {
  for (const Instance& inst : random_instances(InstanceFamily::kSca, 3, {6}, 21)) {
    Mechanism mech = Mechanism::msca(6, 2);
    mech.lottery = Rational(1, 20);
    RunConfig c = br_config(inst, mech, 200, 3);
    c.start = StartMode::kTruthful;
    c.keep_on_tie = false;
    const Trace t = run_dynamics(c);
    CHECK(t.start == simplify(inst.types));
    std::int64_t lottery_rounds = 0;
    for (const RoundRecord& r : t.rounds) lottery_rounds += r.coin.lottery_agent.has_value();
    CHECK(lottery_rounds > 0);
    CHECK(lottery_rounds < 40);
  }
}

}  // namespace
}  // namespace rca
