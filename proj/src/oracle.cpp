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

#include "rca/oracle.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace rca {

namespace {

struct Option {
  Bundle set;
  Value value;
};

class Search {
 public:
  explicit Search(std::vector<std::vector<Option>> options)
      : options_(std::move(options)) {}

  Value best(std::size_t agent, std::uint32_t used) {
    if (agent == options_.size()) return 0;
    const std::uint64_t key = (std::uint64_t{agent} << 32) | used;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Value result = best(agent + 1, used);
    for (const Option& o : options_[agent]) {
      if (used & o.set.mask()) continue;
      result = std::max(result, o.value + best(agent + 1, used | o.set.mask()));
    }
    memo_.emplace(key, result);
    return result;
  }

  OptimalSolution reconstruct() {
    OptimalSolution sol;
    sol.allocation.resize(options_.size());
    sol.welfare = best(0, 0);
    std::uint32_t used = 0;
    Value remaining = sol.welfare;
    for (std::size_t agent = 0; agent < options_.size(); ++agent) {
      if (best(agent + 1, used) == remaining) continue;
      for (const Option& o : options_[agent]) {
        if (used & o.set.mask()) continue;
        if (o.value + best(agent + 1, used | o.set.mask()) == remaining) {
          sol.allocation[agent] = o.set;
          used |= o.set.mask();
          remaining -= o.value;
          break;
        }
      }
    }
    return sol;
  }

 private:
  std::vector<std::vector<Option>> options_;
  std::unordered_map<std::uint64_t, Value> memo_;
};

}  // namespace

OptimalSolution optimal_allocation(std::span<const WeightedSet> bids, int n,
                                   int m, std::optional<int> cap) {
  if (m > kOracleMaxItems) throw SizeError("too many items for the oracle");
  if (n > kOracleMaxAgents) throw SizeError("too many agents for the oracle");
  std::vector<std::vector<Option>> options(n);
  for (const WeightedSet& b : bids) {
    if (b.agent < 0 || b.agent >= n) {
      throw std::invalid_argument("oracle bid for unknown agent");
    }
    if (b.set.empty() || b.value <= 0 || !b.set.fits(m)) continue;
    if (cap && b.set.size() > *cap) continue;
    auto& list = options[b.agent];
    auto it = std::find_if(list.begin(), list.end(),
                           [&](const Option& o) { return o.set == b.set; });
    if (it == list.end()) {
      list.push_back({b.set, b.value});
    } else {
      it->value = std::max(it->value, b.value);
    }
  }
  for (auto& list : options) {
    std::sort(list.begin(), list.end(),
              [](const Option& a, const Option& b) { return a.set < b.set; });
  }
  return Search(std::move(options)).reconstruct();
}

OptimalSolution optimal_allocation(std::span<const Valuation> types, int m,
                                   std::optional<int> cap) {
  std::vector<WeightedSet> bids;
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (const Atom& atom : types[i].atoms()) {
      bids.push_back({static_cast<AgentId>(i), atom.set, atom.value});
    }
  }
  return optimal_allocation(bids, static_cast<int>(types.size()), m, cap);
}

}  // namespace rca
