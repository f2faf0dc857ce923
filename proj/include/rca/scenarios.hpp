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

// Built-in scenario library, compiled in from scenarios/.

#ifndef RCA_SCENARIOS_HPP_
#define RCA_SCENARIOS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rca/experiment.hpp"

namespace rca {

/// Experiment names, sorted.
std::vector<std::string> scenario_names();

/// Text of a bundled file ("cycle.instance", "partition-stuck.experiment").
std::optional<std::string> bundled_file(const std::string& file_name);

/// Throws std::invalid_argument for unknown names.
ExperimentConfig load_scenario(const std::string& name);

/// Writes every bundled file into `dir`; returns the written paths.
std::vector<std::filesystem::path> export_scenarios(
    const std::filesystem::path& dir);

}  // namespace rca

#endif  // RCA_SCENARIOS_HPP_
