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

#include "rca/scenarios.hpp"

#include <fstream>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "rca/io.hpp"

namespace rca {

namespace {

struct Entry {
  const char* name;
  const char* text;
};

constexpr Entry kFiles[] = {
#include "scenario_data.inc"
};

constexpr std::string_view kSuffix = ".experiment";

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const Entry& e : kFiles) {
    std::string_view name(e.name);
    if (name.ends_with(kSuffix)) {
      out.emplace_back(name.substr(0, name.size() - kSuffix.size()));
    }
  }
  return out;
}

std::optional<std::string> bundled_file(const std::string& file_name) {
  for (const Entry& e : kFiles) {
    if (file_name == e.name) return std::string(e.text);
  }
  return std::nullopt;
}

ExperimentConfig load_scenario(const std::string& name) {
  const auto text = bundled_file(name + std::string(kSuffix));
  if (!text) throw std::invalid_argument("unknown scenario '" + name + "'");
  return parse_experiment(*text, name + std::string(kSuffix),
                          [](const std::string& path) {
                            auto body = bundled_file(path);
                            if (!body) {
                              throw std::runtime_error("no bundled file " + path);
                            }
                            return *body;
                          });
}

std::vector<std::filesystem::path> export_scenarios(
    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const Entry& e : kFiles) {
    const auto path = dir / e.name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << e.text;
    out.push_back(path);
  }
  return out;
}

}  // namespace rca
