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

// Experiments: a set of instances, a mechanism, a dynamics configuration
// and acceptance thresholds. Every (instance, replica) pair is one run.

#ifndef RCA_EXPERIMENT_HPP_
#define RCA_EXPERIMENT_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "rca/dynamics.hpp"
#include "rca/generators.hpp"
#include "rca/metrics.hpp"
#include "rca/oracle.hpp"

namespace rca {

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kMA;
  /// MA only: "greedy", "combined" or "partition".
  std::string rule = "greedy";
  /// Size cap; defaults to the instance's s.
  std::optional<int> s;
  /// Partition sides as item labels (rule "partition").
  std::vector<std::string> side_a;
  std::vector<std::string> side_b;
  Rational gamma{0};
  std::optional<Rational> lottery;
  friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

struct DynamicsSpec {
  DynamicsKind kind = DynamicsKind::kBestResponse;
  /// Exactly one of rounds and rounds_per_agent is set.
  std::optional<std::int64_t> rounds;
  std::optional<std::int64_t> rounds_per_agent;
  std::uint64_t seed = 1;
  int replicas = 1;
  std::optional<ScriptedOrder> order;
  StartMode start = StartMode::kEmpty;
  bool keep_on_tie = true;
  friend bool operator==(const DynamicsSpec&, const DynamicsSpec&) = default;
};

struct AgentsSpec {
  Behavior behavior = Behavior::kBestResponse;
  LearnerParams params;
  /// Byzantine agents by 0-based id.
  std::vector<AgentId> byzantine;
  /// Additionally, the last k agents of every instance are byzantine.
  int byzantine_last = 0;
  friend bool operator==(const AgentsSpec&, const AgentsSpec&) = default;
};

enum class BoundKind {
  kNone,
  kRegret,            ///< SW_opt * (1/(c+1) - slack), honest agents only
  kScaBestResponse,   ///< SW_opt * (1/(8(s+1)) - epsilon)
  kCaBestResponse,    ///< SW_opt * (1/(16(ceil(sqrt m)+1)) - epsilon)
};

std::string to_string(BoundKind b);
BoundKind parse_bound(const std::string& name);

struct AcceptanceSpec {
  Rational epsilon{1, 10};
  BoundKind bound = BoundKind::kNone;
  Rational slack{1, 20};
  /// Fraction of runs that must meet the welfare bound, the step-fraction
  /// floor and the regret cap.
  Rational min_pass_fraction{1};
  bool require_separated = false;
  /// Floor on every agent's P1-or-P2 step fraction.
  std::optional<Rational> min_step_fraction;
  bool price_cover = false;
  std::optional<std::int64_t> expect_cycle_period;
  std::optional<bool> expect_converged;
  std::optional<Rational> expect_final_ratio;
  std::optional<Rational> max_final_regret;
  std::optional<Rational> max_regret;
  friend bool operator==(const AcceptanceSpec&, const AcceptanceSpec&) = default;
};

struct ExperimentConfig {
  std::string name;
  /// One entry per listed instance; empty for instances given inline.
  std::vector<std::string> instance_paths;
  std::vector<Instance> instances;
  std::optional<GenerateSpec> generate;
  std::uint64_t generate_seed = 1;
  MechanismSpec mechanism;
  DynamicsSpec dynamics;
  AgentsSpec agents;
  AcceptanceSpec acceptance;
  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// Throws std::invalid_argument on inconsistent settings.
void validate(const ExperimentConfig& config);

/// Listed instances first, then generated ones.
std::vector<Instance> experiment_instances(const ExperimentConfig& config);

Mechanism build_mechanism(const MechanismSpec& spec, const Instance& instance);

/// Feasibility cap of the optimum the mechanism competes with.
std::optional<int> optimum_cap(const Mechanism& mech);

/// Optimum over the mechanism's feasible outcomes: the size cap, and for
/// partition rules the one-side restriction.
OptimalSolution mechanism_optimum(const Mechanism& mech,
                                  std::span<const Valuation> types);

struct RunPlan {
  std::size_t index = 0;
  std::size_t instance = 0;
  int replica = 0;
  RunConfig config;
  std::vector<AgentId> byzantine;
};

std::vector<RunPlan> plan_runs(const ExperimentConfig& config);

struct RunSummary {
  std::size_t index = 0;
  std::size_t instance = 0;
  int replica = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  std::int64_t rounds = 0;
  Value optimum = 0;
  Value honest_optimum = 0;
  Rational average_true;
  Rational average_declared;
  Rational ratio;
  std::optional<Rational> welfare_threshold;
  bool welfare_pass = true;
  std::vector<std::optional<Rational>> regret;
  Rational max_regret;
  std::optional<bool> separated;
  std::optional<std::int64_t> separation_failure;
  std::vector<Rational> step_fraction;
  std::vector<Rational> g_fraction;
  std::optional<bool> price_cover_pass;
  std::optional<Rational> price_cover_min_slack;
  std::optional<std::int64_t> cycle_period;
  std::optional<bool> converged;
  std::int64_t last_change = 0;
  std::optional<Rational> final_ratio;
  std::optional<Rational> final_regret;
};

/// Oracle results shared by every run on one instance.
struct InstanceFacts {
  OptimalSolution optimum;
  /// Optimum over agents that are never byzantine in this experiment.
  Value honest_optimum = 0;
  /// Benchmark allocation (A_i) for the step and G fractions.
  Allocation benchmark;
};

InstanceFacts instance_facts(const ExperimentConfig& config,
                             const Instance& instance,
                             std::span<const AgentId> byzantine);

/// Runs one plan and evaluates it. Writes the trace CSV when `csv` is set.
RunSummary evaluate_run(const ExperimentConfig& config, const RunPlan& plan,
                        const InstanceFacts& facts,
                        const std::optional<std::filesystem::path>& csv);

struct CheckResult {
  std::string name;
  bool passed = false;
  Rational pass_fraction;
  Rational required;
};

struct ExperimentResult {
  std::vector<RunSummary> runs;
  std::vector<std::string> errors;  ///< "run <k>: message"
  std::vector<CheckResult> checks;
  bool passed = false;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  bool parallel = true;
};

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

/// Applies the configured thresholds to finished runs.
std::vector<CheckResult> evaluate_checks(const ExperimentConfig& config,
                                         const std::vector<RunSummary>& runs);

nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result);

}  // namespace rca

#endif  // RCA_EXPERIMENT_HPP_
