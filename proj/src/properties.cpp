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

#include "rca/properties.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace rca {

namespace {

Bundle random_set(Rng& rng, int m, int max_size) {
  const int size = static_cast<int>(rng.between(1, std::min(m, max_size)));
  std::vector<int> items(m);
  for (int k = 0; k < m; ++k) items[k] = k;
  std::uint32_t mask = 0;
  for (int k = 0; k < size; ++k) {
    const auto pick = k + static_cast<int>(rng.below(m - k));
    std::swap(items[k], items[pick]);
    mask |= std::uint32_t{1} << items[k];
  }
  return Bundle(mask);
}

Bundle random_subset(Rng& rng, Bundle set) {
  std::uint32_t mask = set.mask() & static_cast<std::uint32_t>(rng.next());
  if (mask == 0) mask = set.mask() & (~set.mask() + 1);
  return Bundle(mask);
}

std::optional<MonotoneWitness> monotone_trial(const AllocationRule& rule,
                                              const ProfileGenerator& gen,
                                              std::uint64_t trial,
                                              std::uint64_t seed) {
  Rng rng = make_stream(seed, trial);
  Profile profile = gen(rng);
  if (profile.empty()) return std::nullopt;
  const auto i = static_cast<AgentId>(rng.below(profile.size()));
  const Declaration d = profile[i];
  if (d.is_empty() || rule(profile)[i] != d.set()) return std::nullopt;
  const Bundle subset = random_subset(rng, d.set());
  const Value subset_bid = d.bid() + rng.between(0, d.bid());
  Profile raised = profile;
  raised[i] = Declaration::single_minded(subset, subset_bid);
  if (rule(raised)[i] == subset) return std::nullopt;
  return MonotoneWitness{trial, std::move(profile), i,      d.set(),
                         d.bid(), subset,            subset_bid};
}

std::optional<LoserWitness> loser_trial(const AllocationRule& rule,
                                        const ProfileGenerator& gen,
                                        std::uint64_t trial,
                                        std::uint64_t seed) {
  Rng rng = make_stream(seed, trial);
  Profile first = gen(rng);
  const Profile donor = gen(rng);
  if (first.size() < 2) return std::nullopt;
  const auto i = static_cast<AgentId>(rng.below(first.size()));
  const Declaration own = first[i];
  if (own.is_empty()) return std::nullopt;
  first[i] = Declaration::empty();
  const Allocation winners = rule(first);
  // Losers of the run without i are resampled; winners keep their bids.
  Profile second = first;
  for (std::size_t j = 0; j < second.size(); ++j) {
    if (static_cast<AgentId>(j) == i || !winners[j].empty()) continue;
    if (rng.below(2) == 0) second[j] = donor[j % donor.size()];
  }
  if (second == first || rule(second) != winners) return std::nullopt;
  first[i] = own;
  second[i] = own;
  const Bundle a = rule(first)[i];
  const Bundle b = rule(second)[i];
  if (a == b) return std::nullopt;
  return LoserWitness{trial, std::move(first), std::move(second), i, own, a,
                      b};
}

template <class Trial>
auto first_witness_serial(std::uint64_t trials, Trial trial)
    -> decltype(trial(std::uint64_t{0})) {
  for (std::uint64_t k = 0; k < trials; ++k) {
    if (auto w = trial(k)) return w;
  }
  return std::nullopt;
}

template <class Trial>
auto first_witness_parallel(std::uint64_t trials, Trial trial)
    -> decltype(trial(std::uint64_t{0})) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::uint64_t>(k);
    if (idx > best.load(std::memory_order_relaxed)) continue;
    if (trial(idx)) {
      std::uint64_t cur = best.load();
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
    }
  }
  if (best.load() == kNone) return std::nullopt;
  return trial(best.load());
}

}  // namespace

Profile random_profile(Rng& rng, int max_agents, int m, Value max_value,
                       int max_size) {
  const auto n = static_cast<std::size_t>(rng.between(1, max_agents));
  Profile profile(n);
  for (Declaration& d : profile) {
    if (rng.below(4) == 0) continue;
    const Bundle set = random_set(rng, m, max_size);
    d = Declaration::single_minded(set, rng.between(1, max_value));
  }
  return profile;
}

ProfileGenerator profile_generator(int max_agents, int m, Value max_value,
                                   int max_size) {
  return [=](Rng& rng) {
    return random_profile(rng, max_agents, m, max_value, max_size);
  };
}

std::optional<MonotoneWitness> check_monotone(const AllocationRule& rule,
                                              const ProfileGenerator& gen,
                                              std::uint64_t trials,
                                              std::uint64_t seed) {
  return first_witness_parallel(trials, [&](std::uint64_t k) {
    return monotone_trial(rule, gen, k, seed);
  });
}

std::optional<MonotoneWitness> check_monotone_serial(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed) {
  return first_witness_serial(trials, [&](std::uint64_t k) {
    return monotone_trial(rule, gen, k, seed);
  });
}

std::optional<LoserWitness> check_loser_independent(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed) {
  return first_witness_parallel(trials, [&](std::uint64_t k) {
    return loser_trial(rule, gen, k, seed);
  });
}

std::optional<LoserWitness> check_loser_independent_serial(
    const AllocationRule& rule, const ProfileGenerator& gen,
    std::uint64_t trials, std::uint64_t seed) {
  return first_witness_serial(trials, [&](std::uint64_t k) {
    return loser_trial(rule, gen, k, seed);
  });
}

std::optional<LoserWitness> check_loser_independent_exhaustive(
    const AllocationRule& rule, int agents, Value max_value) {
  std::vector<Declaration> options{Declaration::empty()};
  const std::uint32_t full = Bundle::full(rule.items).mask();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (Value v = 1; v <= max_value; ++v) {
      options.push_back(Declaration::single_minded(Bundle(mask), v));
    }
  }
  const std::size_t k = options.size();
  std::size_t combos = 1;
  for (int j = 1; j < agents; ++j) combos *= k;

  for (AgentId i = 0; i < agents; ++i) {
    // Signature of the run without i: each agent's allocation and, for
    // winners, the declaration that won.
    using Signature = std::vector<std::tuple<std::uint32_t, std::uint32_t, Value>>;
    std::map<Signature, Profile> seen;
    for (std::size_t code = 0; code < combos; ++code) {
      Profile without(agents);
      std::size_t rest = code;
      for (AgentId j = 0; j < agents; ++j) {
        if (j == i) continue;
        without[j] = options[rest % k];
        rest /= k;
      }
      const Allocation winners = rule(without);
      Signature sig;
      for (AgentId j = 0; j < agents; ++j) {
        const bool won = !winners[j].empty();
        sig.emplace_back(winners[j].mask(), won ? without[j].set().mask() : 0,
                         won ? without[j].bid() : 0);
      }
      auto [it, fresh] = seen.emplace(sig, without);
      if (fresh) continue;
      for (const Declaration& own : options) {
        if (own.is_empty()) continue;
        Profile a = it->second;
        Profile b = without;
        a[i] = own;
        b[i] = own;
        const Bundle ra = rule(a)[i];
        const Bundle rb = rule(b)[i];
        if (ra != rb) return LoserWitness{code, a, b, i, own, ra, rb};
      }
    }
  }
  return std::nullopt;
}

}  // namespace rca
