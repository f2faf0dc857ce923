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

// Serial reference versus OpenMP kernels: the replica runner and the
// property-check trial loops. Also checks that both produce the same
// results.
//
//   rca_bench [replicas] [trials]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "rca/experiment.hpp"
#include "rca/properties.hpp"
#include "rca/scenarios.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
              name, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int replicas = argc > 1 ? std::atoi(argv[1]) : 16;
  const std::uint64_t trials = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
  std::printf("threads: %d\n", omp_get_max_threads());

  auto config = rca::load_scenario("random-sca");
  config.dynamics.replicas = replicas;
  rca::ExperimentResult serial_result, parallel_result;
  const double rs = seconds([&] {
    serial_result = rca::run_experiment(config, {.out_dir = {}, .parallel = false});
  });
  const double rp = seconds([&] {
    parallel_result = rca::run_experiment(config, {.out_dir = {}, .parallel = true});
  });
  bool same = serial_result.runs.size() == parallel_result.runs.size();
  for (std::size_t k = 0; same && k < serial_result.runs.size(); ++k) {
    same = serial_result.runs[k].average_true == parallel_result.runs[k].average_true;
  }
  report("replicas (random-sca)", rs, rp, same);

  const auto rule = rca::make_greedy_rule(8, 2);
  const auto gen = rca::profile_generator(5, 8, 32, 3);
  std::optional<rca::MonotoneWitness> ms, mp;
  const double ms_t = seconds([&] { ms = rca::check_monotone_serial(rule, gen, trials, 1); });
  const double mp_t = seconds([&] { mp = rca::check_monotone(rule, gen, trials, 1); });
  report("monotone trials", ms_t, mp_t, ms.has_value() == mp.has_value());

  std::optional<rca::LoserWitness> ls, lp;
  const double ls_t = seconds(
      [&] { ls = rca::check_loser_independent_serial(rule, gen, trials, 1); });
  const double lp_t =
      seconds([&] { lp = rca::check_loser_independent(rule, gen, trials, 1); });
  report("loser-independence trials", ls_t, lp_t, ls.has_value() == lp.has_value());
  return same ? 0 : 1;
}
