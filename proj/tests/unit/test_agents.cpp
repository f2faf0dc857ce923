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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rca/agents.hpp"

namespace rca {
namespace {

using test::bid;
using test::none;
using test::set;

Mechanism greedy_ma() { return Mechanism::ma(make_greedy_rule(4, 2)); }

TEST_CASE("undominated bids") {
  const auto types = test::cycle_types();
  CHECK(undominated_bid(types[0], set("ab")) == bid("ab", 4));
  CHECK(undominated_bid(types[0], Bundle()) == none());
  CHECK(undominated_bid(types[0], set("c")) == none());
}

TEST_CASE("candidates are empty first, then atoms in bundle order") {
  const auto types = test::cycle_types();
  CHECK(candidate_bundles(types[0]) == std::vector<Bundle>{Bundle(), set("d"), set("ab")});
  CHECK(candidate_bundles(Valuation()) == std::vector<Bundle>{Bundle()});
}

TEST_CASE("counterfactual utilities on the cycle instance") {
  const auto types = test::cycle_types();
  const AgentModel two = make_agent(1, types[1], Behavior::kBestResponse);
  const Profile state{bid("d", 6), bid("bc", 5), bid("c", 4), bid("d", 5)};
  // Candidates: empty, {a}, {b,c}.
  CHECK(counterfactual_utilities(two, state, greedy_ma()) ==
        std::vector<Rational>{0, 2, 1});
  const AgentModel solo = make_agent(0, types[0], Behavior::kBestResponse);
  CHECK(counterfactual_utilities(solo, Profile{none()}, greedy_ma()) ==
        std::vector<Rational>{0, 6, 4});
  // Threshold at or above the value gives 0.
  const AgentModel three = make_agent(2, types[2], Behavior::kBestResponse);
  const Profile blocked{none(), bid("bc", 5), none(), none()};
  CHECK(counterfactual_utilities(three, blocked, greedy_ma()) ==
        std::vector<Rational>{0, 0});
}

TEST_CASE("best response on the cycle instance") {
  const auto types = test::cycle_types();
  const AgentModel one = make_agent(0, types[0], Behavior::kBestResponse);
  const AgentModel two = make_agent(1, types[1], Behavior::kBestResponse);
  const Profile s1{bid("d", 6), bid("bc", 5), bid("c", 4), bid("d", 5)};
  CHECK(best_response(two, s1, greedy_ma()) == bid("a", 2));
  const Profile s2{bid("d", 6), bid("a", 2), bid("c", 4), bid("d", 5)};
  CHECK(best_response(one, s2, greedy_ma()) == bid("ab", 4));
  // Nothing positive to gain: stays empty.
  const AgentModel three = make_agent(2, types[2], Behavior::kBestResponse);
  const Profile blocked{none(), bid("bc", 5), none(), none()};
  CHECK(best_response(three, blocked, greedy_ma()) == none());
}

TEST_CASE("best_candidate keeps the current choice on ties") {
  const std::vector<Rational> u{0, 3, 3};
  CHECK(best_candidate(u, Rational(3), true) == std::nullopt);
  CHECK(best_candidate(u, Rational(2), true) == std::size_t{1});
  CHECK(best_candidate(u, Rational(3), false) == std::size_t{1});
}

TEST_CASE("best responses are undominated and never lose utility") {
  Rng rng(51);
  const Mechanism mech = Mechanism::msca(6, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = rng.between(2, 5);
    std::vector<Valuation> types;
    Profile p;
    for (std::int64_t i = 0; i < n; ++i) {
      types.push_back(test::random_valuation(rng, 6, 2, 20, 3));
      const auto cands = candidate_bundles(types.back());
      p.push_back(undominated_bid(types.back(), cands[rng.below(cands.size())]));
    }
    const AgentId i = static_cast<AgentId>(rng.below(n));
    const AgentModel model = make_agent(i, types[i], Behavior::kBestResponse);
    const Declaration d = best_response(model, p, mech);
    REQUIRE(d.bid() == types[i].value_of(d.set()));
    const Rational before = expected_utility(mech, i, p[i], p, types[i]);
    const Rational after = expected_utility(mech, i, d, p, types[i]);
    REQUIRE(after >= before);
  }
}

TEST_CASE("MW starts uniform") {
  const LearnerState state = init_learner(4);
  std::vector<int> counts(4);
  for (std::uint64_t seed = 0; seed < 8000; ++seed) {
    Rng rng(seed);
    ++counts[learner_choose_mw(state, rng)];
  }
  for (int c : counts) CHECK(std::abs(c - 2000) < 200);
}

TEST_CASE("MW concentrates on a dominant candidate") {
  LearnerState state = init_learner(3);
  const std::vector<Rational> u{0, 10, 0};
  double last = 0;
  for (int t = 0; t < 400; ++t) {
    learner_update(state, u, 10, {});
    const double p = std::exp(state.log_weights[1]) /
                     (std::exp(state.log_weights[0]) + std::exp(state.log_weights[1]) +
                      std::exp(state.log_weights[2]));
    REQUIRE(p >= last);
    last = p;
  }
  CHECK(last > 0.999);
  Rng rng(3);
  int hits = 0;
  for (int k = 0; k < 1000; ++k) hits += learner_choose_mw(state, rng) == 1;
  CHECK(hits > 990);
}

TEST_CASE("MW with zero learning rate never moves") {
  LearnerState state = init_learner(3);
  LearnerParams params;
  params.eta = 0.0;
  for (int t = 0; t < 50; ++t) {
    learner_update(state, std::vector<Rational>{1, 5, 2}, 5, params);
  }
  CHECK(state.log_weights == std::vector<double>{0, 0, 0});
  CHECK(state.cumulative == std::vector<Rational>{50, 250, 100});
}

TEST_CASE("FPL choices") {
  Rng rng(1);
  CHECK(learner_choose_fpl(init_learner(3), rng, 0) == 0);
  LearnerState state = init_learner(3);
  state.cumulative = {0, 100, 0};
  for (int k = 0; k < 200; ++k) REQUIRE(learner_choose_fpl(state, rng, 50) == 1);
  state.rounds = 3;
  CHECK(fpl_scale(state, 10, {}) == 20);
  LearnerParams fixed;
  fixed.fpl_scale = 7;
  CHECK(fpl_scale(state, 10, fixed) == 7);
}

TEST_CASE("FPL regret on alternating payoffs shrinks like 1/sqrt(T)") {
  // Two candidates paying (1, 0) and (0, 1) on alternate rounds.
  const std::int64_t T = 10000;
  LearnerState state = init_learner(2);
  Rng rng(77);
  Rational actual;
  for (std::int64_t t = 0; t < T; ++t) {
    const std::vector<Rational> u = t % 2 == 0 ? std::vector<Rational>{1, 0}
                                               : std::vector<Rational>{0, 1};
    const auto pick = learner_choose_fpl(state, rng, fpl_scale(state, 1, {}));
    actual += u[pick];
    learner_update(state, u, 1, {});
  }
  const Rational regret = external_regret(state.cumulative, actual, T);
  CHECK(to_double(regret) <= 3.0 / std::sqrt(static_cast<double>(T)));
}

TEST_CASE("byzantine bids never exceed the value") {
  const Valuation v({{set("a"), 3}, {set("bc"), 8}});
  const AgentModel model = make_agent(0, v, Behavior::kByzantine);
  Rng a(9), b(9);
  for (int k = 0; k < 500; ++k) {
    const Declaration d = byzantine_bid(model, a);
    REQUIRE(d.bid() <= v.value_of(d.set()));
    REQUIRE(d == byzantine_bid(model, b));
  }
  const AgentModel zero = make_agent(0, Valuation(), Behavior::kByzantine);
  Rng c(2);
  for (int k = 0; k < 20; ++k) REQUIRE(byzantine_bid(zero, c).is_empty());
}

TEST_CASE("external regret formula") {
  CHECK(external_regret(std::vector<Rational>{0, 5}, Rational(0), 1) == Rational(5));
  CHECK(external_regret(std::vector<Rational>{0, 5}, Rational(5), 1) == Rational(0));
  CHECK(external_regret(std::vector<Rational>{2, 6}, Rational(8), 2) == Rational(-1));
  CHECK_THROWS(external_regret(std::vector<Rational>{1}, Rational(0), 0));
  // History form: the agent played its best fixed candidate throughout.
  const auto types = test::cycle_types();
  const AgentModel two = make_agent(1, types[1], Behavior::kMW);
  const std::vector<Profile> history(
      3, Profile{bid("d", 6), bid("a", 2), bid("c", 4), bid("d", 5)});
  CHECK(external_regret(two, greedy_ma(), history) == Rational(0));
}

}  // namespace
}  // namespace rca
