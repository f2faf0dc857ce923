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

// Bidder behaviour. Every agent chooses among a fixed candidate list: Empty
// followed by its valuation's atom bundles in Bundle order. Apart from the
// byzantine sampler, a chosen bundle is always bid at its true value.

#ifndef RCA_AGENTS_HPP_
#define RCA_AGENTS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rca/core.hpp"
#include "rca/mechanisms.hpp"
#include "rca/rng.hpp"

namespace rca {

enum class Behavior { kBestResponse, kMW, kFPL, kByzantine };

std::string to_string(Behavior b);
/// Accepts "best-response", "mw", "fpl", "byzantine".
Behavior parse_behavior(const std::string& name);

struct LearnerParams {
  /// Fixed MW learning rate; the default schedule is sqrt(8 ln K / t).
  std::optional<double> eta;
  /// Fixed FPL perturbation range in ticks; default ceil(u_max * sqrt(t)).
  std::optional<Value> fpl_scale;
  friend bool operator==(const LearnerParams&, const LearnerParams&) = default;
};

struct AgentModel {
  AgentId id = 0;
  Valuation valuation;
  Behavior behavior = Behavior::kBestResponse;
  LearnerParams params;
  std::vector<Bundle> candidates;
};

/// Empty first, then the atom bundles in Bundle order.
std::vector<Bundle> candidate_bundles(const Valuation& valuation);
AgentModel make_agent(AgentId id, Valuation valuation, Behavior behavior,
                      LearnerParams params = {});

/// (chosen, t(chosen)), or Empty when chosen is empty or worthless.
Declaration undominated_bid(const Valuation& valuation, Bundle chosen);

/// Expected utility of bidding each candidate truthfully against `profile`
/// (agent i's own entry is replaced). Indexed like model.candidates.
std::vector<Rational> counterfactual_utilities(const AgentModel& model,
                                               const Profile& profile,
                                               const Mechanism& mech);

/// Index of the best candidate given per-candidate utilities and the
/// utility of the current declaration. With keep_on_tie, nullopt means
/// no candidate strictly improves and the current declaration stays.
std::optional<std::size_t> best_candidate(std::span<const Rational> utilities,
                                          const Rational& current,
                                          bool keep_on_tie);

Declaration best_response(const AgentModel& model, const Profile& profile,
                          const Mechanism& mech, bool keep_on_tie = true);

struct LearnerState {
  std::vector<double> log_weights;
  std::vector<Rational> cumulative;
  std::int64_t rounds = 0;
};

LearnerState init_learner(std::size_t candidates);

/// Samples proportionally to exp(log_weights).
std::size_t learner_choose_mw(const LearnerState& state, Rng& rng);

/// argmax of cumulative utility plus a fresh uniform integer perturbation
/// in [0, scale]; ties go to the earlier candidate.
std::size_t learner_choose_fpl(const LearnerState& state, Rng& rng,
                               Value scale);
/// Default FPL range for the upcoming round.
Value fpl_scale(const LearnerState& state, Value u_max,
                const LearnerParams& params);

/// Full-information update with this round's counterfactual utilities.
void learner_update(LearnerState& state, std::span<const Rational> utilities,
                    Value u_max, const LearnerParams& params);

/// Uniform candidate, uniform bid in [0, t(S)]; 0 means Empty.
Declaration byzantine_bid(const AgentModel& model, Rng& rng);

/// (1/T) * (best fixed candidate total - realized total). `candidate_totals`
/// are sums over the T rounds.
Rational external_regret(std::span<const Rational> candidate_totals,
                         const Rational& actual_total, std::int64_t rounds);

/// Same quantity from an explicit history of (own declaration, others).
Rational external_regret(const AgentModel& model, const Mechanism& mech,
                         std::span<const Profile> history);

}  // namespace rca

#endif  // RCA_AGENTS_HPP_
