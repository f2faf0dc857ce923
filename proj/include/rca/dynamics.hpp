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

// Repeated-game engines.
//
// Regret rounds: every agent picks a declaration at once, the mechanism
// runs, and learners receive the utility of every candidate against the
// profile just played. Best-response rounds: one agent (uniform, or taken
// from a scripted order) switches to a utility-maximizing declaration.
//
// Randomness comes from independent streams of the run seed: stream 0
// draws updaters, stream 1 draws mechanism coins, stream 2 + k belongs to
// agent k.

#ifndef RCA_DYNAMICS_HPP_
#define RCA_DYNAMICS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rca/agents.hpp"
#include "rca/core.hpp"
#include "rca/mechanisms.hpp"
#include "rca/rng.hpp"

namespace rca {

struct Instance {
  int m = 0;
  std::optional<int> s;
  std::vector<std::string> labels;
  std::vector<Valuation> types;

  int n() const { return static_cast<int>(types.size()); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class DynamicsKind { kRegret, kBestResponse };
enum class StartMode { kEmpty, kTruthful };

/// Updaters for best-response rounds: `prefix` first, then `cycle`
/// repeated, or uniform draws when `random_tail` is set. Ids are 0-based.
struct ScriptedOrder {
  std::vector<AgentId> prefix;
  std::vector<AgentId> cycle;
  bool random_tail = false;
  friend bool operator==(const ScriptedOrder&, const ScriptedOrder&) = default;
};

/// Text form with 1-based ids: "3,4,1,2,1" cycles the whole list,
/// "3,4,1,2,1|2,1" runs a prefix then cycles, "1|*" runs a prefix then
/// draws uniformly.
ScriptedOrder parse_scripted_order(const std::string& text);
std::string format_scripted_order(const ScriptedOrder& order);

struct AgentSpec {
  Behavior behavior = Behavior::kBestResponse;
  LearnerParams params;
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct RunConfig {
  Instance instance;
  Mechanism mechanism;
  DynamicsKind dynamics = DynamicsKind::kBestResponse;
  std::vector<AgentSpec> agents;
  std::int64_t rounds = 1;
  std::uint64_t seed = 0;
  StartMode start = StartMode::kEmpty;
  bool keep_on_tie = true;
  std::optional<ScriptedOrder> order;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const RunConfig& config);

std::vector<AgentModel> make_agents(const RunConfig& config);

struct RoundRecord {
  std::int64_t round = 0;
  std::optional<AgentId> updater;  ///< nullopt for simultaneous rounds
  Profile profile;
  Coin coin;
  Outcome outcome;
  Value declared_sw = 0;
  Value true_sw = 0;
};

/// Full-information totals of one agent over a regret run.
struct AgentFeedback {
  bool tracked = false;  ///< false for byzantine agents
  std::vector<Rational> candidate_totals;
  Rational actual_total;
  std::int64_t rounds = 0;
};

struct Trace {
  Profile start;
  std::vector<RoundRecord> rounds;
  std::vector<AgentFeedback> feedback;  ///< regret runs only
};

/// Memoizes outcomes and expected utilities of one mechanism over the
/// profiles a run revisits.
class Evaluator {
 public:
  Evaluator(Mechanism mech, std::vector<AgentModel> models);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  const Mechanism& mechanism() const;
  const std::vector<AgentModel>& models() const;

  const Outcome& outcome(const Profile& profile, const Coin& coin);
  /// Expected utility of every candidate of agent i against `profile`.
  const std::vector<Rational>& utilities(const Profile& profile, AgentId i);
  /// Expected utility of agent i's own declaration in `profile`.
  Rational current_utility(const Profile& profile, AgentId i);
  Declaration best_response(const Profile& profile, AgentId i,
                            bool keep_on_tie);

 private:
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

Coin draw_coin(const Mechanism& mech, Rng& rng, int n);

Trace run_regret_dynamics(const RunConfig& config);
Trace run_best_response_dynamics(const RunConfig& config);
Trace run_dynamics(const RunConfig& config);

Profile start_profile(const RunConfig& config);

struct Cycle {
  std::int64_t period = 0;
  /// Round index (1-based) where the periodic tail starts.
  std::int64_t start = 0;
};

/// Smallest p such that the profile sequence is p-periodic from some round
/// on, for at least two full periods up to the end of the trace.
std::optional<Cycle> detect_cycle(const Trace& trace);

/// Round of the last declaration change, 0 if none.
std::int64_t last_change_round(const Trace& trace);

/// No non-byzantine agent strictly improves by deviating from `profile`.
bool is_fixed_point(Evaluator& eval, const Profile& profile);

}  // namespace rca

#endif  // RCA_DYNAMICS_HPP_
