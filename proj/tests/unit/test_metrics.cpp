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

#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rca/dynamics.hpp"
#include "rca/metrics.hpp"
#include "rca/oracle.hpp"

namespace rca {
namespace {

using test::bid;
using test::none;
using test::set;

// Trace that plays `profile` every round under greedy s = 2.
Trace constant_trace(const Profile& profile, int rounds) {
  const Mechanism mech = Mechanism::ma(make_greedy_rule(4, 2));
  const auto types = test::cycle_types();
  Trace t;
  t.start = Profile(profile.size());
  for (int k = 1; k <= rounds; ++k) {
    RoundRecord r;
    r.round = k;
    r.profile = profile;
    r.outcome = run(mech, profile);
    r.declared_sw = declared_welfare(r.outcome.allocation, profile);
    r.true_sw = social_welfare(r.outcome.allocation, types);
    t.rounds.push_back(r);
  }
  return t;
}

RunConfig cycle_run(DynamicsKind kind, std::int64_t rounds,
                         std::uint64_t seed) {
  RunConfig c;
  c.instance = test::cycle_instance();
  c.mechanism = Mechanism::ma(make_greedy_rule(4, 2));
  c.dynamics = kind;
  c.agents.assign(4, AgentSpec{kind == DynamicsKind::kRegret ? Behavior::kMW
                                                             : Behavior::kBestResponse,
                               {}});
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

const Profile kOptimal{bid("ab", 4), none(), bid("c", 4), bid("d", 5)};

TEST_CASE("welfare_report trivial traces") {
  const auto types = test::cycle_types();
  const WelfareReport best = welfare_report(constant_trace(kOptimal, 5), types, 13);
  CHECK(best.ratio == Rational(1));
  CHECK(best.average_true == Rational(13));
  CHECK(best.series == std::vector<Value>(5, 13));
  const WelfareReport empty = welfare_report(constant_trace(Profile(4), 5), types, 13);
  CHECK(empty.ratio == Rational(0));
  CHECK(welfare_report(constant_trace(Profile(4), 3), types, 0).ratio == Rational(1));
  CHECK_THROWS(welfare_report(constant_trace(kOptimal, 2),
                              std::vector<Valuation>(3), 13));
}

TEST_CASE("welfare average equals the mean of recomputed outcomes") {
  const RunConfig c = cycle_run(DynamicsKind::kRegret, 500, 3);
  const Trace t = run_dynamics(c);
  const WelfareReport w = welfare_report(t, c.instance.types, 13);
  Value total = 0;
  for (const RoundRecord& r : t.rounds) {
    total += social_welfare(run(c.mechanism, r.profile, r.coin).allocation,
                            c.instance.types);
  }
  CHECK(w.average_true == Rational(total, 500));
}

TEST_CASE("MW on the cycle instance reaches a quarter of the optimum") {
  const RunConfig c = cycle_run(DynamicsKind::kRegret, 20000, 5);
  const Trace t = run_dynamics(c);
  const WelfareReport w = welfare_report(t, c.instance.types, 13);
  CHECK(w.ratio >= Rational(1, 4) - Rational(1, 20));
  const Allocation opt = optimal_allocation(c.instance.types, 4, 2).allocation;
  const RegretReport regret = regret_report(t);
  for (AgentId i = 0; i < 4; ++i) {
    const PriceCoverResult l = price_cover_check(t, c.instance.types, opt, i, c.mechanism,
                                        *regret.regret[i]);
    CHECK(l.pass);
  }
}

TEST_CASE("resilience report") {
  const RunConfig c = cycle_run(DynamicsKind::kRegret, 300, 9);
  const Trace t = run_dynamics(c);
  const WelfareReport plain = welfare_report(t, c.instance.types, 13);
  const WelfareReport same = resilience_report(t, c.instance.types, {}, 4, 2);
  CHECK(same.average_true == plain.average_true);
  CHECK(same.ratio == plain.ratio);
  const std::vector<AgentId> all{0, 1, 2, 3};
  const WelfareReport none_left = resilience_report(t, c.instance.types, all, 4, 2);
  CHECK(none_left.optimum == 0);
  CHECK(none_left.ratio == Rational(1));
}

TEST_CASE("byzantine agent 4 leaves the others a quarter of their optimum") {
  RunConfig c = cycle_run(DynamicsKind::kRegret, 20000, 13);
  c.agents[3].behavior = Behavior::kByzantine;
  const Trace t = run_dynamics(c);
  const std::vector<AgentId> byz{3};
  const WelfareReport r = resilience_report(t, c.instance.types, byz, 4, 2);
  // Without agent 4: {d} to agent 1, {a} to agent 2, {c} to agent 3.
  CHECK(r.optimum == 12);
  CHECK(r.ratio >= Rational(1, 4) - Rational(1, 20));
}

TEST_CASE("regret report") {
  Trace t = constant_trace(kOptimal, 4);
  t.feedback.resize(4);
  t.feedback[0] = AgentFeedback{true, {Rational(0), Rational(8), Rational(16)},
                                Rational(16), 4};
  t.feedback[1] = AgentFeedback{true, {Rational(0), Rational(6)}, Rational(2), 4};
  const RegretReport r = regret_report(t);
  CHECK(*r.regret[0] == Rational(0));
  CHECK(*r.regret[1] == Rational(1));
  CHECK(*r.best_candidate[1] == 1);
  CHECK_FALSE(r.regret[2].has_value());
  CHECK(r.max_regret == Rational(1));
}

TEST_CASE("g_membership clauses") {
  const auto types = test::cycle_types();
  const std::vector<Bundle> opt{set("ab"), Bundle(), set("c"), set("d")};
  // Agent 1: truthful on A_1 (own-bid clause). Agent 2: A_2 empty, value 0.
  // Agent 3: bids 1 on c, blocked by agent 2's {bc}@2 (2*2 > 4 fails, = 4).
  // Agent 4: {d}@3 and blocked by nobody: 2*3 >= 5.
  const Profile p{bid("ab", 4), bid("bc", 2), bid("c", 1), bid("d", 3)};
  Trace t = constant_trace(p, 2);
  const GMembership g = g_membership(t, types, opt);
  CHECK(g.member[0][0]);
  CHECK(g.member[1][0]);
  CHECK_FALSE(g.member[2][0]);
  CHECK(g.member[3][0]);
  CHECK(g.fraction[2] == Rational(0));
  CHECK(g.fraction[0] == Rational(1));
  // The step fraction uses >= for the blocking clause.
  const auto steps = step_fractions(t, types, opt);
  CHECK(steps[2] == Rational(1));
  CHECK(intersecting_bids(p, 2, set("c")) == 2);
  CHECK(intersecting_bids(p, 0, set("abcd")) == 6);
}

TEST_CASE("G fraction on best-response runs of the cycle instance") {
  const auto types = test::cycle_types();
  const Allocation opt = optimal_allocation(types, 4, 2).allocation;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Trace t = run_dynamics(cycle_run(DynamicsKind::kBestResponse, 400, seed));
    const GMembership g = g_membership(t, types, opt);
    good += std::all_of(g.fraction.begin(), g.fraction.end(),
                        [](const Rational& f) { return f >= Rational(2, 5); });
  }
  CHECK(good >= 180);
}

TEST_CASE("price_cover trivial cases") {
  Instance inst;
  inst.m = 2;
  inst.labels = {"a", "b"};
  inst.types = {Valuation::single_minded(set("ab"), 5)};
  const Mechanism mech = Mechanism::ma(make_greedy_rule(2, 2));
  Trace t;
  t.start = Profile(1);
  RoundRecord r;
  r.round = 1;
  r.profile = {bid("ab", 5)};
  r.outcome = run(mech, r.profile);
  t.rounds = {r, r, r};
  const std::vector<Bundle> opt{set("ab")};
  const PriceCoverResult l = price_cover_check(t, inst.types, opt, 0, mech, Rational(0));
  CHECK(l.pass);
  CHECK(l.lhs == Rational(5));
  CHECK(l.slack == Rational(0));

  // Single round in which the agent loses to a rival bidding 7 on a.
  inst.m = 2;
  inst.types.push_back(Valuation::single_minded(set("a"), 7));
  r.profile = {none(), bid("a", 7)};
  r.outcome = run(mech, r.profile);
  t.start = Profile(2);
  t.rounds = {r};
  const PriceCoverResult one = price_cover_check(t, inst.types, std::vector<Bundle>{set("ab"), {}},
                                        0, mech, Rational(5));
  // min(t_1(ab), theta) = min(5, 7) = 5; target 5 minus regret 5.
  CHECK(one.lhs == Rational(5));
  CHECK(one.rhs == Rational(0));
  CHECK(one.pass);
}

TEST_CASE("separation report and warm-up") {
  CHECK(separation_warmup(1) == 2);
  CHECK(separation_warmup(2) == 6);   // 2 * ceil(3)
  CHECK(separation_warmup(3) == 12);  // 2 * ceil(5.5)
  const auto types = test::cycle_types();
  const Profile fine{bid("ab", 4), bid("a", 2), none(), none()};
  const SeparationReport ok = separation_report(constant_trace(fine, 3), types, {});
  CHECK(ok.rounds == 3);
  CHECK(ok.separated == 3);
  CHECK_FALSE(ok.first_failure.has_value());
  Trace t = constant_trace(fine, 3);
  // Agent 1 bids 1 on {ab} against a lower-valued {a}@2.
  t.rounds[1].profile = {bid("ab", 1), bid("a", 2), none(), none()};
  const SeparationReport bad = separation_report(t, types, {});
  CHECK(bad.separated == 2);
  CHECK(*bad.first_failure == 2);
  CHECK(separation_report(t, types, {}, 2).rounds == 1);
}

TEST_CASE("replica statistics") {
  const ReplicaStats s = replica_stats({Rational(3), Rational(1), Rational(2), Rational(5)});
  CHECK(s.min == Rational(1));
  CHECK(s.median == Rational(2));
  CHECK(s.max == Rational(5));
  CHECK(s.count == 4);
  CHECK(replica_stats({}).count == 0);
  const std::vector<Rational> v{Rational(1, 2), Rational(1, 3), Rational(1)};
  CHECK(fraction_at_least(v, Rational(1, 2)) == Rational(2, 3));
  CHECK(fraction_at_least(std::vector<Rational>{}, Rational(1)) == Rational(1));
}

}  // namespace
}  // namespace rca
