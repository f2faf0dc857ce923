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

// rca: validate, run, scenarios, oracle.
//
// Exit status: 0 when everything passes, 1 when an acceptance check fails,
// 2 on usage, load or runtime errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rca/experiment.hpp"
#include "rca/io.hpp"
#include "rca/oracle.hpp"
#include "rca/scenarios.hpp"

namespace {

namespace fs = std::filesystem;

bool is_instance_path(const std::string& arg) {
  return fs::path(arg).extension() == ".instance";
}

// A file path, or the name of a bundled scenario.
rca::ExperimentConfig load_config(const std::string& arg) {
  if (fs::exists(arg)) return rca::load_experiment(arg);
  return rca::load_scenario(arg);
}

rca::Instance load_any_instance(const std::string& arg) {
  if (fs::exists(arg)) return rca::load_instance(arg);
  if (auto text = rca::bundled_file(arg)) return rca::parse_instance(*text, arg);
  throw std::runtime_error("no such instance file: " + arg);
}

void print_checks(const rca::ExperimentConfig& config,
                  const rca::ExperimentResult& result) {
  std::cout << config.name << ": " << result.runs.size() << " runs\n";
  for (const auto& e : result.errors) std::cout << "  error " << e << "\n";
  for (const auto& c : result.checks) {
    std::cout << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << " "
              << rca::to_string(c.pass_fraction) << " (required "
              << rca::to_string(c.required) << ")\n";
  }
  std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated combinatorial auctions lab"};
  app.require_subcommand(1);

  std::string validate_target;
  auto* validate = app.add_subcommand("validate", "Check an instance or experiment file");
  validate->add_option("file", validate_target, "File or scenario name")->required();

  std::string run_target;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  std::string out_dir = "out";
  std::optional<std::string> gamma, epsilon, scripted_order, lottery;
  bool serial = false;
  auto* run = app.add_subcommand("run", "Run an experiment file or scenario");
  run->add_option("experiment", run_target, "File or scenario name")->required();
  run->add_option("--seed", seed, "Override dynamics.seed");
  run->add_option("--replicas", replicas, "Override dynamics.replicas");
  run->add_option("--out-dir", out_dir, "Directory for CSV traces and summary.json");
  run->add_option("--gamma", gamma, "Override mechanism.gamma (p/q or decimal)");
  run->add_option("--epsilon", epsilon, "Override acceptance.epsilon");
  run->add_option("--scripted-order", scripted_order,
                  "Override dynamics.scripted_order, e.g. \"3,4,1,2,1|2,1\"");
  run->add_option("--separated-lottery", lottery,
                  "Enable the separated lottery with this probability");
  run->add_flag("--serial", serial, "Run replicas on one thread");

  std::optional<std::string> export_dir;
  auto* scenarios = app.add_subcommand("scenarios", "List built-in scenarios");
  scenarios->add_option("--export", export_dir, "Write the scenario files here");

  std::string oracle_target;
  std::optional<int> cap;
  auto* oracle = app.add_subcommand("oracle", "Print SW_opt and an optimal allocation");
  oracle->add_option("instance", oracle_target, "Instance file")->required();
  oracle->add_option("--s", cap, "Bundle size cap (default: the file's s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      if (is_instance_path(validate_target)) {
        const auto inst = load_any_instance(validate_target);
        std::cout << "ok: " << inst.n() << " agents, " << inst.m << " items\n";
      } else {
        const auto config = load_config(validate_target);
        std::cout << "ok: " << config.name << ", "
                  << rca::plan_runs(config).size() << " runs\n";
      }
      return 0;
    }
    if (*scenarios) {
      if (export_dir) {
        for (const auto& p : rca::export_scenarios(*export_dir)) {
          std::cout << p.string() << "\n";
        }
      } else {
        for (const auto& name : rca::scenario_names()) std::cout << name << "\n";
      }
      return 0;
    }
    if (*oracle) {
      const auto inst = load_any_instance(oracle_target);
      const auto sol = rca::optimal_allocation(inst.types, inst.m,
                                               cap ? cap : inst.s);
      std::cout << "SW_opt " << sol.welfare << "\n";
      for (int i = 0; i < inst.n(); ++i) {
        std::cout << "agent " << i + 1 << ": {";
        bool first = true;
        for (int k = 0; k < inst.m; ++k) {
          if (sol.allocation[i].mask() >> k & 1) {
            std::cout << (first ? "" : ",") << inst.labels[k];
            first = false;
          }
        }
        std::cout << "}\n";
      }
      return 0;
    }

    auto config = load_config(run_target);
    if (seed) config.dynamics.seed = *seed;
    if (replicas) config.dynamics.replicas = *replicas;
    if (gamma) config.mechanism.gamma = rca::parse_rational(*gamma);
    if (epsilon) config.acceptance.epsilon = rca::parse_rational(*epsilon);
    if (scripted_order) {
      config.dynamics.order = rca::parse_scripted_order(*scripted_order);
    }
    if (lottery) config.mechanism.lottery = rca::parse_rational(*lottery);
    rca::validate(config);
    rca::RunOptions options;
    options.out_dir = out_dir;
    options.parallel = !serial;
    const auto result = rca::run_experiment(config, options);
    const auto summary = rca::summary_json(config, result);
    std::ofstream(fs::path(out_dir) / "summary.json") << summary.dump(2) << "\n";
    print_checks(config, result);
    return result.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
