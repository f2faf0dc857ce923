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

// Non-strategic allocation rules over single-minded bids.
//
// Rules see bids as Amounts: a tick count minus an integer number of
// infinitesimals. An unshaded profile uses shade 0 everywhere. Shading one
// agent's bid by a single infinitesimal places it strictly below every equal
// tick bid and strictly above every lower one, which is how critical prices
// locate open threshold boundaries exactly.

#ifndef RCA_ALGORITHMS_HPP_
#define RCA_ALGORITHMS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rca/core.hpp"

namespace rca {

struct Amount {
  Value ticks = 0;
  Value shade = 0;  ///< infinitesimals subtracted from ticks

  constexpr Amount& operator+=(Amount o) {
    ticks += o.ticks;
    shade += o.shade;
    return *this;
  }
  friend constexpr Amount operator+(Amount a, Amount b) { return a += b; }
  friend constexpr bool operator==(Amount, Amount) = default;
  friend constexpr std::strong_ordering operator<=>(Amount a, Amount b) {
    if (auto c = a.ticks <=> b.ticks; c != 0) return c;
    return b.shade <=> a.shade;
  }
};

struct Bid {
  Bundle set;
  Amount amount;
  constexpr bool empty() const { return set.empty() || amount.ticks <= 0; }
};

using BidVector = std::vector<Bid>;

/// Converts declarations to bids, shading `shaded`'s bid (if any) by one
/// infinitesimal.
BidVector to_bids(const Profile& profile,
                  std::optional<AgentId> shaded = std::nullopt);

/// Sum of the bid amounts of agents whose bid set equals their allocation.
Amount declared_amount(std::span<const Bid> bids,
                       std::span<const Bundle> allocation);

/// Smallest k with k * k >= m.
int ceil_sqrt(int m);

/// Greedy for s-CA: bids in descending amount, ties by ascending agent
/// index; a bid is accepted iff disjoint from everything accepted so far.
/// Bids for more than s items are ignored.
Allocation greedy_sca(std::span<const Bid> bids, int s);
Allocation greedy_sca(const Profile& profile, int s);

/// Max of two candidates: greedy over bids of at most ceil_sqrt(m) items
/// (grand-bundle bids excluded), and the single highest grand-bundle bid.
/// Ties go to the greedy side. Bids of intermediate size are ignored.
Allocation combined_ca(std::span<const Bid> bids, int m);
Allocation combined_ca(const Profile& profile, int m);

struct Partition {
  Bundle a;
  Bundle b;
};

/// Greedy restricted to bids inside `a` versus greedy restricted to bids
/// inside `b`; the larger declared welfare wins, ties go to `a`. Throws
/// std::invalid_argument unless a and b partition the m items.
Allocation partition_max(std::span<const Bid> bids, const Partition& parts,
                         int m, int s);
Allocation partition_max(const Profile& profile, const Partition& parts,
                         int m, int s);

enum class RuleKind { kGreedy, kCombined, kPartition, kCustom };

/// A deterministic allocation rule together with its feasibility kind and
/// claimed approximation factor.
struct AllocationRule {
  std::string name;
  RuleKind kind = RuleKind::kCustom;
  int items = 0;
  std::optional<int> size_cap;
  Rational approximation{1};
  std::optional<Partition> partition;
  std::function<Allocation(std::span<const Bid>)> allocate;

  Allocation operator()(std::span<const Bid> bids) const {
    return allocate(bids);
  }
  Allocation operator()(const Profile& profile) const {
    return allocate(to_bids(profile));
  }
};

AllocationRule make_greedy_rule(int m, int s);
AllocationRule make_combined_rule(int m);
AllocationRule make_partition_rule(int m, const Partition& parts, int s);

}  // namespace rca

#endif  // RCA_ALGORITHMS_HPP_
