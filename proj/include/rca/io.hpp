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

// Instance and experiment files (YAML), trace CSV.
//
// Instance file:
//
//   m: 4                      # item count, at most 32
//   items: [a, b, c, d]       # optional labels, default a, b, c, ...
//   s: 2                      # optional size cap
//   agents:
//     - id: 1                 # ids run 1..n in order
//       atoms:
//         - {items: [a, b], value: 4}
//         - {items: [d], value: 6}
//
// Rationals are written as "p/q" strings or plain integers. The experiment
// schema is documented in README.md.

#ifndef RCA_IO_HPP_
#define RCA_IO_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rca/dynamics.hpp"
#include "rca/experiment.hpp"

namespace rca {

/// Schema or value error, prefixed with "source:line:column: ".
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns the text of an instance file referenced by an experiment.
using InstanceResolver = std::function<std::string(const std::string& path)>;

Instance parse_instance(const std::string& text,
                        const std::string& source = "<instance>");
Instance load_instance(const std::filesystem::path& path);
std::string dump_instance(const Instance& instance);

ExperimentConfig parse_experiment(const std::string& text,
                                  const std::string& source,
                                  const InstanceResolver& resolve);
/// Instance paths are resolved relative to the experiment file.
ExperimentConfig load_experiment(const std::filesystem::path& path);
std::string dump_experiment(const ExperimentConfig& config);

/// Columns: round, updater, set_i and bid_i per agent, coin, won_i per
/// agent, pay_i per agent, declared_sw, true_sw. Sets are item masks;
/// the coin is "k" (grand bids kept) or "i" (ignored), with ":L<id>"
/// appended when the lottery fired.
void write_trace_csv(std::ostream& out, const Trace& trace, int n);

/// Integer, "p/q" or finite decimal ("0.05"). Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

std::string read_file(const std::filesystem::path& path);

}  // namespace rca

#endif  // RCA_IO_HPP_
