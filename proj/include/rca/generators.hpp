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

// Random instance families.

#ifndef RCA_GENERATORS_HPP_
#define RCA_GENERATORS_HPP_

#include <string>
#include <vector>

#include "rca/dynamics.hpp"
#include "rca/rng.hpp"

namespace rca {

enum class InstanceFamily {
  kSca,  ///< every atom has at most s items
  kCa,   ///< small atoms, some grand-bundle atoms, a few in between
};

struct GenerateSpec {
  InstanceFamily family = InstanceFamily::kSca;
  int instances = 1;
  int min_agents = 2;
  int max_agents = 6;
  /// m is drawn uniformly from this list.
  std::vector<int> items{8};
  int s = 2;
  Value max_value = 32;
  int max_atoms = 3;
  friend bool operator==(const GenerateSpec&, const GenerateSpec&) = default;
};

std::string to_string(InstanceFamily f);
InstanceFamily parse_family(const std::string& name);

/// Item labels "a", "b", ... for m <= 26, otherwise "i0", "i1", ...
std::vector<std::string> default_labels(int m);

Instance generate_instance(const GenerateSpec& spec, Rng& rng);

/// Instance k uses stream k of `seed`.
std::vector<Instance> generate_instances(const GenerateSpec& spec,
                                         std::uint64_t seed);

}  // namespace rca

#endif  // RCA_GENERATORS_HPP_
