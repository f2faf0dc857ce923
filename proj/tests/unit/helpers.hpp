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

// Shared fixtures and brute-force reference implementations for tests.
// Nothing here calls into the library code it is compared against.

#ifndef RCA_TESTS_HELPERS_HPP_
#define RCA_TESTS_HELPERS_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rca/core.hpp"
#include "rca/dynamics.hpp"
#include "rca/rng.hpp"

namespace rca::test {

/// Items named by letters: set("bc") has bits 1 and 2.
inline Bundle set(const std::string& letters) {
  std::uint32_t mask = 0;
  for (char c : letters) mask |= std::uint32_t{1} << (c - 'a');
  return Bundle(mask);
}

inline Declaration bid(const std::string& letters, Value x) {
  return Declaration::single_minded(set(letters), x);
}

inline Declaration none() { return Declaration::empty(); }

// Four agents, items a..d, s = 2.
inline std::vector<Valuation> cycle_types() {
  return {Valuation({{set("ab"), 4}, {set("d"), 6}}),
          Valuation({{set("a"), 2}, {set("bc"), 5}}),
          Valuation({{set("c"), 4}}), Valuation({{set("d"), 5}})};
}

inline Instance cycle_instance() {
  Instance inst;
  inst.m = 4;
  inst.s = 2;
  inst.labels = {"a", "b", "c", "d"};
  inst.types = cycle_types();
  return inst;
}

/// Welfare of the best feasible allocation, by trying every assignment of
/// one candidate bundle (or nothing) per agent.
inline Value naive_optimum(const std::vector<Valuation>& types,
                           std::optional<int> cap) {
  const std::size_t n = types.size();
  Value best = 0;
  std::vector<std::size_t> pick(n, 0);
  std::vector<std::vector<Atom>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    options[i].push_back({Bundle(), 0});
    for (const Atom& a : types[i].atoms()) {
      if (!cap || a.set.size() <= *cap) options[i].push_back(a);
    }
  }
  while (true) {
    std::uint32_t used = 0;
    Value total = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Atom& a = options[i][pick[i]];
      if (used & a.set.mask()) ok = false;
      used |= a.set.mask();
      total += a.value;
    }
    if (ok) best = std::max(best, total);
    std::size_t k = 0;
    while (k < n && ++pick[k] == options[k].size()) pick[k++] = 0;
    if (k == n) break;
  }
  return best;
}

/// Greedy s-CA by the textbook rule: descending bid, then agent index.
inline Allocation naive_greedy(const Profile& profile, int s) {
  std::vector<std::size_t> order(profile.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return profile[x].bid() > profile[y].bid();
  });
  Allocation out(profile.size());
  std::uint32_t used = 0;
  for (std::size_t i : order) {
    const Declaration& d = profile[i];
    if (d.is_empty() || d.set().size() > s) continue;
    if (used & d.set().mask()) continue;
    used |= d.set().mask();
    out[i] = d.set();
  }
  return out;
}

inline Valuation random_valuation(Rng& rng, int m, int max_size,
                                  Value max_value, int max_atoms) {
  std::vector<Atom> atoms;
  const auto count = rng.between(1, max_atoms);
  for (std::int64_t k = 0; k < count; ++k) {
    std::uint32_t mask = 0;
    const auto size = rng.between(1, std::min(max_size, m));
    while (std::popcount(mask) < size) mask |= std::uint32_t{1} << rng.below(m);
    const Bundle b(mask);
    if (std::any_of(atoms.begin(), atoms.end(),
                    [&](const Atom& a) { return a.set == b; })) {
      continue;
    }
    atoms.push_back({b, rng.between(1, max_value)});
  }
  return Valuation(atoms);
}

}  // namespace rca::test

#endif  // RCA_TESTS_HELPERS_HPP_
