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

#include "rca/algorithms.hpp"

#include <algorithm>

namespace rca {

BidVector to_bids(const Profile& profile, std::optional<AgentId> shaded) {
  BidVector bids(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Declaration& d = profile[i];
    if (d.is_empty()) continue;
    bids[i].set = d.set();
    bids[i].amount.ticks = d.bid();
    if (shaded && *shaded == static_cast<AgentId>(i)) bids[i].amount.shade = 1;
  }
  return bids;
}

Amount declared_amount(std::span<const Bid> bids,
                       std::span<const Bundle> allocation) {
  Amount total;
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    if (!allocation[i].empty() && !bids[i].empty() &&
        allocation[i].contains(bids[i].set)) {
      total += bids[i].amount;
    }
  }
  return total;
}

int ceil_sqrt(int m) {
  int k = 0;
  while (k * k < m) ++k;
  return k;
}

namespace {

// Greedy over the bids selected by `admit`.
template <class Admit>
Allocation greedy_filtered(std::span<const Bid> bids, Admit admit) {
  std::vector<int> order;
  order.reserve(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (!bids[i].empty() && admit(bids[i])) order.push_back(static_cast<int>(i));
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return bids[a].amount > bids[b].amount;
  });
  Allocation out(bids.size());
  std::uint32_t used = 0;
  for (int i : order) {
    const std::uint32_t mask = bids[i].set.mask();
    if (used & mask) continue;
    used |= mask;
    out[i] = bids[i].set;
  }
  return out;
}

}  // namespace

Allocation greedy_sca(std::span<const Bid> bids, int s) {
  return greedy_filtered(bids, [s](const Bid& b) { return b.set.size() <= s; });
}

Allocation greedy_sca(const Profile& profile, int s) {
  return greedy_sca(to_bids(profile), s);
}

Allocation combined_ca(std::span<const Bid> bids, int m) {
  const Bundle grand = Bundle::full(m);
  const int k = ceil_sqrt(m);
  Allocation small = greedy_filtered(bids, [&](const Bid& b) {
    return b.set != grand && b.set.size() <= k;
  });
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i].empty() || bids[i].set != grand) continue;
    if (!best || bids[i].amount > bids[*best].amount) best = i;
  }
  if (best && bids[*best].amount > declared_amount(bids, small)) {
    Allocation out(bids.size());
    out[*best] = grand;
    return out;
  }
  return small;
}

Allocation combined_ca(const Profile& profile, int m) {
  return combined_ca(to_bids(profile), m);
}

Allocation partition_max(std::span<const Bid> bids, const Partition& parts,
                         int m, int s) {
  if (parts.a.intersects(parts.b) || (parts.a | parts.b) != Bundle::full(m)) {
    throw std::invalid_argument("partition sides must split the items");
  }
  auto side = [&](Bundle within) {
    return greedy_filtered(bids, [&](const Bid& b) {
      return b.set.size() <= s && within.contains(b.set);
    });
  };
  Allocation left = side(parts.a);
  Allocation right = side(parts.b);
  return declared_amount(bids, right) > declared_amount(bids, left) ? right
                                                                    : left;
}

Allocation partition_max(const Profile& profile, const Partition& parts, int m,
                         int s) {
  return partition_max(to_bids(profile), parts, m, s);
}

AllocationRule make_greedy_rule(int m, int s) {
  AllocationRule rule;
  rule.name = "greedy";
  rule.kind = RuleKind::kGreedy;
  rule.items = m;
  rule.size_cap = s;
  rule.approximation = Rational(s + 1);
  rule.allocate = [s](std::span<const Bid> bids) { return greedy_sca(bids, s); };
  return rule;
}

AllocationRule make_combined_rule(int m) {
  AllocationRule rule;
  rule.name = "combined";
  rule.kind = RuleKind::kCombined;
  rule.items = m;
  rule.approximation = Rational(2 * ceil_sqrt(m) + 2);
  rule.allocate = [m](std::span<const Bid> bids) { return combined_ca(bids, m); };
  return rule;
}

AllocationRule make_partition_rule(int m, const Partition& parts, int s) {
  if (parts.a.intersects(parts.b) || (parts.a | parts.b) != Bundle::full(m)) {
    throw std::invalid_argument("partition sides must split the items");
  }
  AllocationRule rule;
  rule.name = "partition";
  rule.kind = RuleKind::kPartition;
  rule.items = m;
  rule.size_cap = s;
  rule.approximation = Rational(s + 1);
  rule.partition = parts;
  rule.allocate = [parts, m, s](std::span<const Bid> bids) {
    return partition_max(bids, parts, m, s);
  };
  return rule;
}

}  // namespace rca
