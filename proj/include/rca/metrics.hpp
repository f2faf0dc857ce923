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

// Trace analytics. Averages and ratios are exact rationals.

#ifndef RCA_METRICS_HPP_
#define RCA_METRICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "rca/core.hpp"
#include "rca/dynamics.hpp"
#include "rca/mechanisms.hpp"

namespace rca {

struct WelfareReport {
  Rational average_true;
  Rational average_declared;
  Value optimum = 0;
  /// average_true / optimum, and 1 when the optimum is 0.
  Rational ratio;
  std::vector<Value> series;
};

/// Throws std::invalid_argument when the trace and types disagree on n.
WelfareReport welfare_report(const Trace& trace,
                             std::span<const Valuation> types, Value optimum);

struct RegretReport {
  /// Per-agent average external regret; nullopt for untracked agents.
  std::vector<std::optional<Rational>> regret;
  /// Index into the agent's candidate list of the best fixed candidate.
  std::vector<std::optional<std::size_t>> best_candidate;
  /// Largest tracked regret, 0 when nothing is tracked.
  Rational max_regret;
};

RegretReport regret_report(const Trace& trace);

/// sum of d_j(S_j) over j != i whose declared set meets `target`.
Value intersecting_bids(const Profile& profile, AgentId i, Bundle target);

/// Per agent and round, membership of
///   sum_{j in R_i(d, A_i)} d_j(S_j) > t_i(A_i) / 2   or   d_i(S_i) >= t_i(A_i) / 2.
struct GMembership {
  std::vector<std::vector<bool>> member;  ///< [agent][round]
  std::vector<Rational> fraction;
};

GMembership g_membership(const Trace& trace, std::span<const Valuation> types,
                         std::span<const Bundle> optimal);

/// Per agent, fraction of rounds with
///   sum_{j in R_i(d, A_i)} d_j(S_j) >= t_i(A_i) / 2   or   d_i(S_i) >= t_i(A_i) / 2.
std::vector<Rational> step_fractions(const Trace& trace,
                                     std::span<const Valuation> types,
                                     std::span<const Bundle> optimal);

/// Welfare against the best allocation that only serves agents outside
/// `byzantine`.
WelfareReport resilience_report(const Trace& trace,
                                std::span<const Valuation> types,
                                std::span<const AgentId> byzantine, int m,
                                std::optional<int> cap);

struct PriceCoverResult {
  bool pass = false;
  Rational lhs;
  Rational rhs;
  Rational slack;
};

/// (1/T) sum_t [t_i(A(d^t)) + min(t_i(A_i), theta_i(A_i, d^t_{-i}))] against
/// t_i(A_i) - regret, with the measured regret in place of the o(1) term.
PriceCoverResult price_cover_check(const Trace& trace, std::span<const Valuation> types,
                          std::span<const Bundle> optimal, AgentId i,
                          const Mechanism& mech, const Rational& regret);

/// Rounds whose profile is separated for every agent.
struct SeparationReport {
  std::int64_t rounds = 0;
  std::int64_t separated = 0;
  std::optional<std::int64_t> first_failure;
};

/// Rounds up to `skip` are not counted.
SeparationReport separation_report(const Trace& trace,
                                   std::span<const Valuation> types,
                                   const SeparationScope& scope,
                                   std::int64_t skip = 0);

/// Rounds before the separation invariant is expected when the run starts
/// from a non-empty profile or drops keep-on-tie: 2 * ceil(n * H_n), about
/// twice the expected time until every agent has updated once.
std::int64_t separation_warmup(int n);

struct ReplicaStats {
  Rational min;
  Rational median;  ///< lower median
  Rational max;
  std::size_t count = 0;
};

ReplicaStats replica_stats(std::vector<Rational> values);

/// Fraction of `values` that are >= threshold; 1 for an empty list.
Rational fraction_at_least(std::span<const Rational> values,
                           const Rational& threshold);

}  // namespace rca

#endif  // RCA_METRICS_HPP_
