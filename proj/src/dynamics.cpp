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

#include "rca/dynamics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rca {

namespace {

std::vector<AgentId> parse_ids(const std::string& text) {
  std::vector<AgentId> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw std::invalid_argument("empty id in scripted order");
    }
    const std::string token = item.substr(b, e - b + 1);
    std::size_t used = 0;
    const int id = std::stoi(token, &used);
    if (used != token.size() || id < 1) {
      throw std::invalid_argument("bad agent id '" + token +
                                  "' in scripted order");
    }
    ids.push_back(id - 1);
  }
  return ids;
}

std::string join_ids(const std::vector<AgentId>& ids) {
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(ids[k] + 1);
  }
  return out;
}

struct KeyHash {
  std::size_t operator()(const std::pair<Profile, std::uint64_t>& key) const {
    return hash_profile(key.first, key.second);
  }
};

std::uint64_t coin_tag(const Coin& coin) {
  return (coin.ignore_big ? 1u : 0u) |
         (coin.lottery_agent ? (std::uint64_t(*coin.lottery_agent) + 1) << 1
                             : 0u);
}

}  // namespace

ScriptedOrder parse_scripted_order(const std::string& text) {
  ScriptedOrder order;
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    order.cycle = parse_ids(text);
  } else {
    order.prefix = parse_ids(text.substr(0, bar));
    const std::string tail = text.substr(bar + 1);
    if (tail == "*") {
      order.random_tail = true;
    } else {
      order.cycle = parse_ids(tail);
    }
  }
  if (order.cycle.empty() && !order.random_tail) {
    throw std::invalid_argument("scripted order has nothing to repeat");
  }
  return order;
}

std::string format_scripted_order(const ScriptedOrder& order) {
  const std::string tail = order.random_tail ? "*" : join_ids(order.cycle);
  if (order.prefix.empty() && !order.random_tail) return tail;
  return join_ids(order.prefix) + "|" + tail;
}

void validate(const RunConfig& config) {
  const int n = config.instance.n();
  if (config.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (static_cast<int>(config.agents.size()) != n) {
    throw std::invalid_argument("one agent spec per agent is required");
  }
  if (config.mechanism.items != config.instance.m) {
    throw std::invalid_argument("mechanism and instance disagree on m");
  }
  if ((config.start != StartMode::kEmpty || !config.keep_on_tie) &&
      !config.mechanism.lottery) {
    throw std::invalid_argument(
        "a non-empty start or disabled keep-on-tie requires the separated "
        "lottery");
  }
  for (const AgentSpec& spec : config.agents) {
    const bool learner =
        spec.behavior == Behavior::kMW || spec.behavior == Behavior::kFPL;
    if (config.dynamics == DynamicsKind::kRegret &&
        spec.behavior == Behavior::kBestResponse) {
      throw std::invalid_argument("regret dynamics needs learner agents");
    }
    if (config.dynamics == DynamicsKind::kBestResponse && learner) {
      throw std::invalid_argument(
          "best-response dynamics needs best-response agents");
    }
  }
  if (config.order) {
    if (config.dynamics != DynamicsKind::kBestResponse) {
      throw std::invalid_argument("scripted order needs best-response dynamics");
    }
    for (const auto* list : {&config.order->prefix, &config.order->cycle}) {
      for (AgentId id : *list) {
        if (id < 0 || id >= n) {
          throw std::invalid_argument("scripted order names agent " +
                                      std::to_string(id + 1) +
                                      " which does not exist");
        }
      }
    }
  }
}

std::vector<AgentModel> make_agents(const RunConfig& config) {
  std::vector<AgentModel> models;
  for (int i = 0; i < config.instance.n(); ++i) {
    models.push_back(make_agent(i, config.instance.types[i],
                                config.agents[i].behavior,
                                config.agents[i].params));
  }
  return models;
}

struct Evaluator::Cache {
  Mechanism mech;
  std::vector<AgentModel> models;
  std::unordered_map<std::pair<Profile, std::uint64_t>, Outcome, KeyHash>
      outcomes;
  std::unordered_map<std::pair<Profile, std::uint64_t>, std::vector<Rational>,
                     KeyHash>
      utilities;
};

Evaluator::Evaluator(Mechanism mech, std::vector<AgentModel> models)
    : cache_(std::make_unique<Cache>()) {
  cache_->mech = std::move(mech);
  cache_->models = std::move(models);
}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

const Mechanism& Evaluator::mechanism() const { return cache_->mech; }
const std::vector<AgentModel>& Evaluator::models() const {
  return cache_->models;
}

const Outcome& Evaluator::outcome(const Profile& profile, const Coin& coin) {
  auto key = std::make_pair(profile, coin_tag(coin));
  auto it = cache_->outcomes.find(key);
  if (it == cache_->outcomes.end()) {
    it = cache_->outcomes
             .emplace(std::move(key), run(cache_->mech, profile, coin))
             .first;
  }
  return it->second;
}

const std::vector<Rational>& Evaluator::utilities(const Profile& profile,
                                                  AgentId i) {
  // Agent i's own entry does not affect its counterfactuals.
  Profile others = profile;
  others[i] = Declaration::empty();
  auto key = std::make_pair(std::move(others), std::uint64_t(i));
  auto it = cache_->utilities.find(key);
  if (it == cache_->utilities.end()) {
    auto u = counterfactual_utilities(cache_->models[i], key.first,
                                      cache_->mech);
    it = cache_->utilities.emplace(std::move(key), std::move(u)).first;
  }
  return it->second;
}

Rational Evaluator::current_utility(const Profile& profile, AgentId i) {
  const AgentModel& model = cache_->models[i];
  const Declaration own = profile[i];
  for (std::size_t k = 0; k < model.candidates.size(); ++k) {
    if (undominated_bid(model.valuation, model.candidates[k]) == own) {
      return utilities(profile, i)[k];
    }
  }
  return expected_utility(cache_->mech, i, own, profile, model.valuation);
}

Declaration Evaluator::best_response(const Profile& profile, AgentId i,
                                     bool keep_on_tie) {
  const AgentModel& model = cache_->models[i];
  const auto& u = utilities(profile, i);
  const auto pick = best_candidate(u, current_utility(profile, i), keep_on_tie);
  if (!pick) return profile[i];
  return undominated_bid(model.valuation, model.candidates[*pick]);
}

Coin draw_coin(const Mechanism& mech, Rng& rng, int n) {
  Coin coin;
  if (mech.lottery && n > 0 && rng.bernoulli(*mech.lottery)) {
    coin.lottery_agent = static_cast<AgentId>(rng.below(n));
  }
  if (mech.kind == MechanismKind::kMCA && mech.gamma > 0) {
    coin.ignore_big = rng.bernoulli(mech.gamma);
  }
  return coin;
}

Profile start_profile(const RunConfig& config) {
  if (config.start == StartMode::kEmpty) return Profile(config.instance.n());
  return simplify(config.instance.types);
}

namespace {

RoundRecord make_record(std::int64_t round, std::optional<AgentId> updater,
                        const Profile& profile, const Coin& coin,
                        Evaluator& eval, const Instance& instance) {
  RoundRecord rec;
  rec.round = round;
  rec.updater = updater;
  rec.profile = profile;
  rec.coin = coin;
  rec.outcome = eval.outcome(profile, coin);
  rec.declared_sw = declared_welfare(rec.outcome.allocation, profile);
  rec.true_sw = social_welfare(rec.outcome.allocation, instance.types);
  return rec;
}

}  // namespace

Trace run_regret_dynamics(const RunConfig& config) {
  validate(config);
  if (config.dynamics != DynamicsKind::kRegret) {
    throw std::invalid_argument("config is not a regret run");
  }
  const int n = config.instance.n();
  Evaluator eval(config.mechanism, make_agents(config));
  const auto& models = eval.models();
  Rng coin_rng = make_stream(config.seed, 1);
  std::vector<Rng> agent_rng;
  std::vector<LearnerState> learners;
  for (int i = 0; i < n; ++i) {
    agent_rng.push_back(make_stream(config.seed, 2 + std::uint64_t(i)));
    learners.push_back(init_learner(models[i].candidates.size()));
  }
  Trace trace;
  trace.feedback.resize(n);
  for (int i = 0; i < n; ++i) {
    AgentFeedback& fb = trace.feedback[i];
    fb.tracked = models[i].behavior != Behavior::kByzantine;
    fb.candidate_totals.assign(models[i].candidates.size(), Rational(0));
  }
  trace.rounds.reserve(config.rounds);

  Profile profile(n);
  trace.start = profile;
  std::vector<std::size_t> chosen(n, 0);
  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    for (int i = 0; i < n; ++i) {
      const AgentModel& model = models[i];
      switch (model.behavior) {
        case Behavior::kMW:
          chosen[i] = learner_choose_mw(learners[i], agent_rng[i]);
          break;
        case Behavior::kFPL: {
          const Value scale = fpl_scale(
              learners[i], model.valuation.max_value(), model.params);
          chosen[i] = learner_choose_fpl(learners[i], agent_rng[i], scale);
          break;
        }
        case Behavior::kByzantine:
          profile[i] = byzantine_bid(model, agent_rng[i]);
          continue;
        case Behavior::kBestResponse:
          throw std::logic_error("unreachable");
      }
      profile[i] = undominated_bid(model.valuation, model.candidates[chosen[i]]);
    }
    const Coin coin = draw_coin(config.mechanism, coin_rng, n);
    trace.rounds.push_back(
        make_record(t, std::nullopt, profile, coin, eval, config.instance));
    for (int i = 0; i < n; ++i) {
      AgentFeedback& fb = trace.feedback[i];
      if (!fb.tracked) continue;
      const auto& u = eval.utilities(profile, i);
      for (std::size_t k = 0; k < u.size(); ++k) fb.candidate_totals[k] += u[k];
      fb.actual_total += u[chosen[i]];
      fb.rounds += 1;
      learner_update(learners[i], u, models[i].valuation.max_value(),
                     models[i].params);
    }
  }
  return trace;
}

Trace run_best_response_dynamics(const RunConfig& config) {
  validate(config);
  if (config.dynamics != DynamicsKind::kBestResponse) {
    throw std::invalid_argument("config is not a best-response run");
  }
  const int n = config.instance.n();
  Evaluator eval(config.mechanism, make_agents(config));
  const auto& models = eval.models();
  Rng order_rng = make_stream(config.seed, 0);
  Rng coin_rng = make_stream(config.seed, 1);
  std::vector<Rng> agent_rng;
  for (int i = 0; i < n; ++i) {
    agent_rng.push_back(make_stream(config.seed, 2 + std::uint64_t(i)));
  }
  Trace trace;
  trace.rounds.reserve(config.rounds);
  Profile profile = start_profile(config);
  trace.start = profile;
  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    std::optional<AgentId> updater;
    if (n > 0) {
      const auto step = static_cast<std::size_t>(t - 1);
      const ScriptedOrder* order = config.order ? &*config.order : nullptr;
      if (order && step < order->prefix.size()) {
        updater = order->prefix[step];
      } else if (order && !order->random_tail) {
        updater = order->cycle[(step - order->prefix.size()) % order->cycle.size()];
      } else {
        updater = static_cast<AgentId>(order_rng.below(n));
      }
      const AgentId i = *updater;
      if (models[i].behavior == Behavior::kByzantine) {
        profile[i] = byzantine_bid(models[i], agent_rng[i]);
      } else {
        profile[i] = eval.best_response(profile, i, config.keep_on_tie);
      }
    }
    const Coin coin = draw_coin(config.mechanism, coin_rng, n);
    trace.rounds.push_back(
        make_record(t, updater, profile, coin, eval, config.instance));
  }
  return trace;
}

Trace run_dynamics(const RunConfig& config) {
  return config.dynamics == DynamicsKind::kRegret
             ? run_regret_dynamics(config)
             : run_best_response_dynamics(config);
}

std::optional<Cycle> detect_cycle(const Trace& trace) {
  const auto& r = trace.rounds;
  const auto total = static_cast<std::int64_t>(r.size());
  for (std::int64_t p = 1; 2 * p <= total; ++p) {
    // Walk back from the end while round t matches round t + p.
    std::int64_t start = total - p;
    while (start > 0 && r[start - 1].profile == r[start - 1 + p].profile) {
      --start;
    }
    if (total - start >= 2 * p) return Cycle{p, start + 1};
  }
  return std::nullopt;
}

std::int64_t last_change_round(const Trace& trace) {
  for (std::size_t t = trace.rounds.size(); t-- > 1;) {
    if (trace.rounds[t].profile != trace.rounds[t - 1].profile) {
      return trace.rounds[t].round;
    }
  }
  if (!trace.rounds.empty() && trace.rounds.front().profile != trace.start) {
    return 1;
  }
  return 0;
}

bool is_fixed_point(Evaluator& eval, const Profile& profile) {
  for (const AgentModel& model : eval.models()) {
    if (model.behavior == Behavior::kByzantine) continue;
    if (eval.best_response(profile, model.id, true) != profile[model.id]) {
      return false;
    }
  }
  return true;
}

}  // namespace rca
