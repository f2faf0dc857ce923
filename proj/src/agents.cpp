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

#include "rca/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rca {

std::string to_string(Behavior b) {
  switch (b) {
    case Behavior::kBestResponse:
      return "best-response";
    case Behavior::kMW:
      return "mw";
    case Behavior::kFPL:
      return "fpl";
    case Behavior::kByzantine:
      return "byzantine";
  }
  return "?";
}

Behavior parse_behavior(const std::string& name) {
  if (name == "best-response") return Behavior::kBestResponse;
  if (name == "mw") return Behavior::kMW;
  if (name == "fpl") return Behavior::kFPL;
  if (name == "byzantine") return Behavior::kByzantine;
  throw std::invalid_argument("unknown behavior '" + name + "'");
}

std::vector<Bundle> candidate_bundles(const Valuation& valuation) {
  std::vector<Bundle> out{Bundle{}};
  for (const Atom& atom : valuation.atoms()) out.push_back(atom.set);
  return out;
}

AgentModel make_agent(AgentId id, Valuation valuation, Behavior behavior,
                      LearnerParams params) {
  AgentModel model;
  model.id = id;
  model.candidates = candidate_bundles(valuation);
  model.valuation = std::move(valuation);
  model.behavior = behavior;
  model.params = params;
  return model;
}

Declaration undominated_bid(const Valuation& valuation, Bundle chosen) {
  if (chosen.empty()) return Declaration::empty();
  return Declaration::single_minded(chosen, valuation.value_of(chosen));
}

std::vector<Rational> counterfactual_utilities(const AgentModel& model,
                                               const Profile& profile,
                                               const Mechanism& mech) {
  std::vector<Rational> out;
  out.reserve(model.candidates.size());
  for (Bundle set : model.candidates) {
    out.push_back(expected_utility(mech, model.id,
                                   undominated_bid(model.valuation, set),
                                   profile, model.valuation));
  }
  return out;
}

std::optional<std::size_t> best_candidate(std::span<const Rational> utilities,
                                          const Rational& current,
                                          bool keep_on_tie) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < utilities.size(); ++k) {
    if (!best || utilities[k] > utilities[*best]) best = k;
  }
  if (keep_on_tie && best && !(utilities[*best] > current)) return std::nullopt;
  return best;
}

Declaration best_response(const AgentModel& model, const Profile& profile,
                          const Mechanism& mech, bool keep_on_tie) {
  const Declaration current = profile[model.id];
  const auto utilities = counterfactual_utilities(model, profile, mech);
  const Rational now =
      expected_utility(mech, model.id, current, profile, model.valuation);
  const auto pick = best_candidate(utilities, now, keep_on_tie);
  if (!pick) return current;
  return undominated_bid(model.valuation, model.candidates[*pick]);
}

LearnerState init_learner(std::size_t candidates) {
  LearnerState state;
  state.log_weights.assign(candidates, 0.0);
  state.cumulative.assign(candidates, Rational(0));
  return state;
}

std::size_t learner_choose_mw(const LearnerState& state, Rng& rng) {
  const auto& lw = state.log_weights;
  const double top = *std::max_element(lw.begin(), lw.end());
  std::vector<double> weights(lw.size());
  double total = 0;
  for (std::size_t k = 0; k < lw.size(); ++k) {
    weights[k] = std::exp(lw[k] - top);
    total += weights[k];
  }
  double r = rng.unit() * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (r < weights[k]) return k;
    r -= weights[k];
  }
  return weights.size() - 1;
}

std::size_t learner_choose_fpl(const LearnerState& state, Rng& rng,
                               Value scale) {
  std::size_t best = 0;
  Rational best_score;
  for (std::size_t k = 0; k < state.cumulative.size(); ++k) {
    const Rational score =
        state.cumulative[k] + (scale > 0 ? rng.between(0, scale) : 0);
    if (k == 0 || score > best_score) {
      best = k;
      best_score = score;
    }
  }
  return best;
}

Value fpl_scale(const LearnerState& state, Value u_max,
                const LearnerParams& params) {
  if (params.fpl_scale) return *params.fpl_scale;
  const double t = static_cast<double>(state.rounds + 1);
  return static_cast<Value>(
      std::ceil(static_cast<double>(std::max<Value>(u_max, 1)) * std::sqrt(t)));
}

void learner_update(LearnerState& state, std::span<const Rational> utilities,
                    Value u_max, const LearnerParams& params) {
  state.rounds += 1;
  const double k = static_cast<double>(utilities.size());
  const double eta =
      params.eta ? *params.eta
                 : std::sqrt(8.0 * std::log(k) / static_cast<double>(state.rounds));
  const double scale = static_cast<double>(std::max<Value>(u_max, 1));
  for (std::size_t c = 0; c < utilities.size(); ++c) {
    state.cumulative[c] += utilities[c];
    state.log_weights[c] += eta * to_double(utilities[c]) / scale;
  }
}

Declaration byzantine_bid(const AgentModel& model, Rng& rng) {
  const Bundle set = model.candidates[rng.below(model.candidates.size())];
  if (set.empty()) return Declaration::empty();
  const Value bid = rng.between(0, model.valuation.value_of(set));
  return Declaration::single_minded(set, bid);
}

Rational external_regret(std::span<const Rational> candidate_totals,
                         const Rational& actual_total, std::int64_t rounds) {
  if (rounds <= 0) throw std::invalid_argument("regret over an empty history");
  const Rational best =
      *std::max_element(candidate_totals.begin(), candidate_totals.end());
  return (best - actual_total) / rounds;
}

Rational external_regret(const AgentModel& model, const Mechanism& mech,
                         std::span<const Profile> history) {
  std::vector<Rational> totals(model.candidates.size());
  Rational actual;
  for (const Profile& profile : history) {
    const auto u = counterfactual_utilities(model, profile, mech);
    for (std::size_t k = 0; k < u.size(); ++k) totals[k] += u[k];
    actual += expected_utility(mech, model.id, profile[model.id], profile,
                               model.valuation);
  }
  return external_regret(totals, actual,
                         static_cast<std::int64_t>(history.size()));
}

}  // namespace rca
