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

// Exact welfare maximization for desk-scale instances.

#ifndef RCA_ORACLE_HPP_
#define RCA_ORACLE_HPP_

#include <optional>
#include <span>

#include "rca/core.hpp"

namespace rca {

inline constexpr int kOracleMaxItems = 20;
inline constexpr int kOracleMaxAgents = 32;

struct WeightedSet {
  AgentId agent = 0;
  Bundle set;
  Value value = 0;
};

struct OptimalSolution {
  Allocation allocation;
  Value welfare = 0;
};

/// Maximum-welfare feasible allocation giving each agent at most one of its
/// listed sets. Memoized search over (next agent, used items); ties resolve
/// toward leaving the agent out, then toward the smaller set. Throws
/// SizeError beyond kOracleMaxItems items or kOracleMaxAgents agents.
OptimalSolution optimal_allocation(std::span<const WeightedSet> bids, int n,
                                   int m, std::optional<int> cap = std::nullopt);

/// Optimum for true types, candidates being the valuation atoms.
OptimalSolution optimal_allocation(std::span<const Valuation> types, int m,
                                   std::optional<int> cap = std::nullopt);

}  // namespace rca

#endif  // RCA_ORACLE_HPP_
