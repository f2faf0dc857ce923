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

#include "rca/generators.hpp"

#include <algorithm>
#include <stdexcept>

#include "rca/algorithms.hpp"

namespace rca {

namespace {

Bundle random_set_of_size(Rng& rng, int m, int size) {
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

int atom_size(const GenerateSpec& spec, int m, Rng& rng) {
  if (spec.family == InstanceFamily::kSca) {
    return static_cast<int>(rng.between(1, std::min(spec.s, m)));
  }
  const int k = ceil_sqrt(m);
  const auto roll = rng.below(10);
  if (roll < 2) return m;
  if (roll < 3 && k + 1 < m) return static_cast<int>(rng.between(k + 1, m - 1));
  return static_cast<int>(rng.between(1, std::min(k, m)));
}

}  // namespace

std::string to_string(InstanceFamily f) {
  return f == InstanceFamily::kSca ? "sca" : "ca";
}

InstanceFamily parse_family(const std::string& name) {
  if (name == "sca") return InstanceFamily::kSca;
  if (name == "ca") return InstanceFamily::kCa;
  throw std::invalid_argument("unknown instance family '" + name + "'");
}

std::vector<std::string> default_labels(int m) {
  std::vector<std::string> labels;
  for (int k = 0; k < m; ++k) {
    labels.push_back(m <= 26 ? std::string(1, static_cast<char>('a' + k))
                             : "i" + std::to_string(k));
  }
  return labels;
}

Instance generate_instance(const GenerateSpec& spec, Rng& rng) {
  if (spec.items.empty()) throw std::invalid_argument("no item counts given");
  Instance inst;
  inst.m = spec.items[rng.below(spec.items.size())];
  inst.labels = default_labels(inst.m);
  if (spec.family == InstanceFamily::kSca) inst.s = spec.s;
  const auto n = rng.between(spec.min_agents, spec.max_agents);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto atoms = rng.between(1, spec.max_atoms);
    std::vector<Atom> list;
    for (std::int64_t a = 0; a < atoms; ++a) {
      const Bundle set =
          random_set_of_size(rng, inst.m, atom_size(spec, inst.m, rng));
      const Value value = rng.between(1, spec.max_value);
      auto same = std::find_if(list.begin(), list.end(),
                               [&](const Atom& x) { return x.set == set; });
      if (same == list.end()) {
        list.push_back({set, value});
      } else {
        same->value = std::max(same->value, value);
      }
    }
    inst.types.emplace_back(std::move(list));
  }
  return inst;
}

std::vector<Instance> generate_instances(const GenerateSpec& spec,
                                         std::uint64_t seed) {
  std::vector<Instance> out;
  for (int k = 0; k < spec.instances; ++k) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(k));
    out.push_back(generate_instance(spec, rng));
  }
  return out;
}

}  // namespace rca
