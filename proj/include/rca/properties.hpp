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

// Randomized refutation searches for monotonicity and loser-independence.
//
// Trial k draws everything from make_stream(seed, k), so the parallel and
// serial checkers visit identical trials and both report the witness with
// the lowest trial index.

#ifndef RCA_PROPERTIES_HPP_
#define RCA_PROPERTIES_HPP_

#include <cstdint>
#include <functional>
#include <optional>

#include "rca/algorithms.hpp"
#include "rca/core.hpp"
#include "rca/rng.hpp"

namespace rca {

using ProfileGenerator = std::function<Profile(Rng&)>;

/// Between 1 and `max_agents` agents, each Empty with probability 1/4 or
/// bidding 1..max_value on a random non-empty set of at most `max_size`
/// of the m items.
Profile random_profile(Rng& rng, int max_agents, int m, Value max_value,
                       int max_size);
ProfileGenerator profile_generator(int max_agents, int m, Value max_value,
                                   int max_size);

/// Agent i wins `set` bidding `bid` but loses `subset` bidding `subset_bid`,
/// with subset contained in set and subset_bid >= bid.
struct MonotoneWitness {
  std::uint64_t trial = 0;
  Profile profile;
  AgentId agent = 0;
  Bundle set;
  Value bid = 0;
  Bundle subset;
  Value subset_bid = 0;
};

/// The rule run without agent i picks the same winners at the same values
/// on `first` and `second`, yet agent i declaring `own` is treated
/// differently.
struct LoserWitness {
  std::uint64_t trial = 0;
  Profile first;
  Profile second;
  AgentId agent = 0;
  Declaration own;
  Bundle first_result;
  Bundle second_result;
};

std::optional<MonotoneWitness> check_monotone(const AllocationRule& rule,
                                              const ProfileGenerator& gen,
                                              std::uint64_t trials,
                                              std::uint64_t seed);
std::optional<MonotoneWitness> check_monotone_serial(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed);

std::optional<LoserWitness> check_loser_independent(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed);
std::optional<LoserWitness> check_loser_independent_serial(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed);

/// Every profile of `agents` agents over the rule's items with bids in
/// 0..max_value. Meant for m <= 3, max_value <= 3, agents <= 3.
std::optional<LoserWitness> check_loser_independent_exhaustive(
    const AllocationRule& rule, int agents, Value max_value);

}  // namespace rca

#endif  // RCA_PROPERTIES_HPP_
