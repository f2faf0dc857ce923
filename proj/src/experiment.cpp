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

#include "rca/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "rca/batch.hpp"
#include "rca/io.hpp"

namespace rca {

namespace {

std::vector<AgentId> byzantine_agents(const AgentsSpec& spec, int n) {
  std::set<AgentId> ids(spec.byzantine.begin(), spec.byzantine.end());
  for (int k = 0; k < spec.byzantine_last && k < n; ++k) ids.insert(n - 1 - k);
  for (AgentId id : ids) {
    if (id < 0 || id >= n) {
      throw std::invalid_argument("byzantine agent " + std::to_string(id + 1) +
                                  " does not exist");
    }
  }
  return {ids.begin(), ids.end()};
}

Bundle side_bundle(const std::vector<std::string>& side,
                   const Instance& instance) {
  std::uint32_t mask = 0;
  for (const std::string& label : side) {
    auto it = std::find(instance.labels.begin(), instance.labels.end(), label);
    if (it == instance.labels.end()) {
      throw std::invalid_argument("unknown item '" + label + "' in partition");
    }
    mask |= std::uint32_t{1} << (it - instance.labels.begin());
  }
  return Bundle(mask);
}

// Coefficient of SW_opt in the configured welfare bound.
std::optional<Rational> bound_coefficient(const AcceptanceSpec& acc,
                                          const Mechanism& mech) {
  switch (acc.bound) {
    case BoundKind::kNone:
      return std::nullopt;
    case BoundKind::kRegret: {
      Rational c = mech.kind == MechanismKind::kMA && mech.rule
                       ? mech.rule->approximation
                       : Rational(mech.cap + 1);
      return Rational(1) / (c + 1) - acc.slack;
    }
    case BoundKind::kScaBestResponse:
      return Rational(1, 8 * (mech.cap + 1)) - acc.epsilon;
    case BoundKind::kCaBestResponse:
      return Rational(1, 16 * (ceil_sqrt(mech.items) + 1)) - acc.epsilon;
  }
  return std::nullopt;
}

std::string run_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%04zu.csv", index);
  return buf;
}

CheckResult make_check(std::string name, const std::vector<bool>& ok,
                       const Rational& required) {
  CheckResult c;
  c.name = std::move(name);
  const auto hits = std::count(ok.begin(), ok.end(), true);
  c.pass_fraction = ok.empty() ? Rational(1)
                               : Rational(hits, static_cast<std::int64_t>(ok.size()));
  c.required = required;
  c.passed = c.pass_fraction >= required;
  return c;
}

std::string rstr(const Rational& r) { return to_string(r); }

}  // namespace

std::string to_string(BoundKind b) {
  switch (b) {
    case BoundKind::kNone:
      return "none";
    case BoundKind::kRegret:
      return "regret";
    case BoundKind::kScaBestResponse:
      return "sca-best-response";
    case BoundKind::kCaBestResponse:
      return "ca-best-response";
  }
  return "?";
}

BoundKind parse_bound(const std::string& name) {
  for (BoundKind b : {BoundKind::kNone, BoundKind::kRegret,
                      BoundKind::kScaBestResponse, BoundKind::kCaBestResponse}) {
    if (to_string(b) == name) return b;
  }
  throw std::invalid_argument("unknown welfare bound '" + name + "'");
}

void validate(const ExperimentConfig& config) {
  if (config.instances.empty() && !config.generate) {
    throw std::invalid_argument("experiment has no instances");
  }
  const DynamicsSpec& dyn = config.dynamics;
  if (dyn.rounds.has_value() == dyn.rounds_per_agent.has_value()) {
    throw std::invalid_argument(
        "set exactly one of dynamics.rounds and dynamics.rounds_per_agent");
  }
  if (dyn.rounds.value_or(1) < 1 || dyn.rounds_per_agent.value_or(1) < 1) {
    throw std::invalid_argument("rounds must be >= 1");
  }
  if (dyn.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  const MechanismSpec& mech = config.mechanism;
  if (mech.kind != MechanismKind::kMCA && mech.gamma != Rational(0)) {
    throw std::invalid_argument("gamma applies to the MCA mechanism only");
  }
  if (mech.gamma < 0 || mech.gamma >= 1) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }
  if (mech.lottery && (*mech.lottery < 0 || *mech.lottery >= 1)) {
    throw std::invalid_argument("separated_lottery must lie in [0, 1)");
  }
  if (mech.kind == MechanismKind::kMA && mech.rule != "greedy" &&
      mech.rule != "combined" && mech.rule != "partition") {
    throw std::invalid_argument("unknown allocation rule '" + mech.rule + "'");
  }
  const AcceptanceSpec& acc = config.acceptance;
  if (acc.epsilon < 0 || acc.epsilon >= 1) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  if (acc.min_pass_fraction < 0 || acc.min_pass_fraction > 1) {
    throw std::invalid_argument("min_pass_fraction must lie in [0, 1]");
  }
  for (const Instance& inst : config.instances) {
    byzantine_agents(config.agents, inst.n());
    build_mechanism(mech, inst);
  }
}

std::vector<Instance> experiment_instances(const ExperimentConfig& config) {
  std::vector<Instance> out = config.instances;
  if (config.generate) {
    auto more = generate_instances(*config.generate, config.generate_seed);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

Mechanism build_mechanism(const MechanismSpec& spec, const Instance& instance) {
  const std::optional<int> s = spec.s ? spec.s : instance.s;
  const int m = instance.m;
  Mechanism mech;
  switch (spec.kind) {
    case MechanismKind::kMA:
      if (spec.rule == "combined") {
        mech = Mechanism::ma(make_combined_rule(m));
      } else if (!s) {
        throw std::invalid_argument("rule '" + spec.rule + "' needs a size cap s");
      } else if (spec.rule == "partition") {
        const Partition parts{side_bundle(spec.side_a, instance),
                              side_bundle(spec.side_b, instance)};
        mech = Mechanism::ma(make_partition_rule(m, parts, *s));
      } else {
        mech = Mechanism::ma(make_greedy_rule(m, *s));
      }
      break;
    case MechanismKind::kMsCA:
      if (!s) throw std::invalid_argument("MsCA needs a size cap s");
      mech = Mechanism::msca(m, *s);
      break;
    case MechanismKind::kMCA:
      mech = Mechanism::mca(m, spec.gamma);
      break;
  }
  mech.lottery = spec.lottery;
  return mech;
}

std::optional<int> optimum_cap(const Mechanism& mech) {
  switch (mech.kind) {
    case MechanismKind::kMA:
      return mech.rule ? mech.rule->size_cap : std::nullopt;
    case MechanismKind::kMsCA:
      return mech.cap;
    case MechanismKind::kMCA:
      return std::nullopt;
  }
  return std::nullopt;
}

OptimalSolution mechanism_optimum(const Mechanism& mech,
                                  std::span<const Valuation> types) {
  const std::optional<int> cap = optimum_cap(mech);
  if (!mech.rule || !mech.rule->partition) {
    return optimal_allocation(types, mech.items, cap);
  }
  // Feasible outcomes use items of one side only.
  OptimalSolution best;
  bool first = true;
  for (Bundle side : {mech.rule->partition->a, mech.rule->partition->b}) {
    std::vector<Valuation> restricted;
    for (const Valuation& v : types) {
      std::vector<Atom> atoms;
      for (const Atom& atom : v.atoms()) {
        if (side.contains(atom.set)) atoms.push_back(atom);
      }
      restricted.emplace_back(std::move(atoms));
    }
    OptimalSolution sol = optimal_allocation(restricted, mech.items, cap);
    if (first || sol.welfare > best.welfare) best = std::move(sol);
    first = false;
  }
  return best;
}

std::vector<RunPlan> plan_runs(const ExperimentConfig& config) {
  validate(config);
  const DynamicsSpec& dyn = config.dynamics;
  std::vector<RunPlan> plans;
  const auto instances = experiment_instances(config);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Instance& inst = instances[k];
    const auto byzantine = byzantine_agents(config.agents, inst.n());
    for (int r = 0; r < dyn.replicas; ++r) {
      RunPlan plan;
      plan.index = plans.size();
      plan.instance = k;
      plan.replica = r;
      plan.byzantine = byzantine;
      RunConfig& rc = plan.config;
      rc.instance = inst;
      rc.mechanism = build_mechanism(config.mechanism, inst);
      rc.dynamics = dyn.kind;
      rc.agents.assign(inst.n(), AgentSpec{config.agents.behavior,
                                           config.agents.params});
      for (AgentId b : byzantine) rc.agents[b].behavior = Behavior::kByzantine;
      rc.rounds = dyn.rounds ? *dyn.rounds
                             : *dyn.rounds_per_agent * std::max(1, inst.n());
      rc.seed = mix_seed(mix_seed(dyn.seed, k), static_cast<std::uint64_t>(r));
      rc.start = dyn.start;
      rc.keep_on_tie = dyn.keep_on_tie;
      rc.order = dyn.order;
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

InstanceFacts instance_facts(const ExperimentConfig& config,
                             const Instance& instance,
                             std::span<const AgentId> byzantine) {
  const Mechanism mech = build_mechanism(config.mechanism, instance);
  InstanceFacts facts;
  facts.optimum = mechanism_optimum(mech, instance.types);
  if (byzantine.empty()) {
    facts.honest_optimum = facts.optimum.welfare;
  } else {
    std::vector<Valuation> honest = instance.types;
    for (AgentId b : byzantine) honest[b] = Valuation();
    facts.honest_optimum = mechanism_optimum(mech, honest).welfare;
  }
  // MCA competes with the unrestricted optimum, but its welfare argument
  // runs over the best allocation into small sets.
  facts.benchmark = mech.kind == MechanismKind::kMCA
                        ? optimal_allocation(instance.types, instance.m,
                                             mech.cap)
                              .allocation
                        : facts.optimum.allocation;
  return facts;
}

RunSummary evaluate_run(const ExperimentConfig& config, const RunPlan& plan,
                        const InstanceFacts& facts,
                        const std::optional<std::filesystem::path>& csv) {
  const RunConfig& rc = plan.config;
  const Instance& inst = rc.instance;
  const Mechanism& mech = rc.mechanism;
  const AcceptanceSpec& acc = config.acceptance;
  const Trace trace = run_dynamics(rc);
  if (csv) {
    std::ofstream out(*csv);
    if (!out) throw std::runtime_error("cannot write " + csv->string());
    write_trace_csv(out, trace, inst.n());
  }

  RunSummary s;
  s.index = plan.index;
  s.instance = plan.instance;
  s.replica = plan.replica;
  s.seed = rc.seed;
  s.n = inst.n();
  s.m = inst.m;
  s.rounds = rc.rounds;
  s.optimum = facts.optimum.welfare;
  s.honest_optimum = facts.honest_optimum;
  const WelfareReport w = welfare_report(trace, inst.types, s.optimum);
  s.average_true = w.average_true;
  s.average_declared = w.average_declared;
  s.ratio = w.ratio;
  if (auto coef = bound_coefficient(acc, mech)) {
    const Value base =
        acc.bound == BoundKind::kRegret ? s.honest_optimum : s.optimum;
    s.welfare_threshold = *coef * base;
    s.welfare_pass = s.average_true >= *s.welfare_threshold;
  }

  if (rc.dynamics == DynamicsKind::kRegret) {
    const RegretReport r = regret_report(trace);
    s.regret = r.regret;
    s.max_regret = r.max_regret;
    if (acc.price_cover) {
      bool all = true;
      std::optional<Rational> min_slack;
      for (AgentId i = 0; i < inst.n(); ++i) {
        if (!r.regret[i]) continue;
        const PriceCoverResult l = price_cover_check(
            trace, inst.types, facts.optimum.allocation, i, mech, *r.regret[i]);
        all = all && l.pass;
        if (!min_slack || l.slack < *min_slack) min_slack = l.slack;
      }
      s.price_cover_pass = all;
      s.price_cover_min_slack = min_slack;
    }
    return s;
  }

  if (mech.kind != MechanismKind::kMA) {
    const bool assumptions = rc.start == StartMode::kEmpty && rc.keep_on_tie;
    const SeparationReport sep = separation_report(
        trace, inst.types, separation_scope(mech),
        assumptions ? 0 : separation_warmup(inst.n()));
    s.separated = sep.separated == sep.rounds;
    s.separation_failure = sep.first_failure;
  }
  s.step_fraction = step_fractions(trace, inst.types, facts.benchmark);
  s.g_fraction = g_membership(trace, inst.types, facts.benchmark).fraction;
  // Periods are only meaningful when the update order is deterministic.
  const auto& order = plan.config.order;
  if (order && !order->random_tail) {
    if (auto cycle = detect_cycle(trace)) s.cycle_period = cycle->period;
  }
  s.last_change = last_change_round(trace);

  Evaluator eval(mech, make_agents(rc));
  const Profile& last = trace.rounds.back().profile;
  s.converged = is_fixed_point(eval, last);
  const Value final_sw = trace.rounds.back().true_sw;
  s.final_ratio =
      s.optimum == 0 ? Rational(1) : Rational(final_sw, s.optimum);
  Rational worst;
  for (const AgentModel& model : eval.models()) {
    if (model.behavior == Behavior::kByzantine) continue;
    const auto& u = eval.utilities(last, model.id);
    const Rational best = *std::max_element(u.begin(), u.end());
    worst = std::max(worst, best - eval.current_utility(last, model.id));
  }
  s.final_regret = worst;
  return s;
}

std::vector<CheckResult> evaluate_checks(const ExperimentConfig& config,
                                         const std::vector<RunSummary>& runs) {
  const AcceptanceSpec& acc = config.acceptance;
  std::vector<CheckResult> checks;
  auto collect = [&](auto pred) {
    std::vector<bool> ok;
    for (const RunSummary& r : runs) ok.push_back(pred(r));
    return ok;
  };
  if (acc.bound != BoundKind::kNone) {
    checks.push_back(make_check(
        "welfare_bound", collect([](const RunSummary& r) { return r.welfare_pass; }),
        acc.min_pass_fraction));
  }
  if (acc.require_separated) {
    checks.push_back(make_check("separated", collect([](const RunSummary& r) {
                                  return r.separated.value_or(false);
                                }),
                                Rational(1)));
  }
  if (acc.min_step_fraction) {
    const Rational floor = *acc.min_step_fraction;
    checks.push_back(make_check(
        "step_fraction", collect([&](const RunSummary& r) {
          return !r.step_fraction.empty() || r.n == 0
                     ? std::all_of(r.step_fraction.begin(), r.step_fraction.end(),
                                   [&](const Rational& f) { return f >= floor; })
                     : false;
        }),
        acc.min_pass_fraction));
  }
  if (acc.price_cover) {
    checks.push_back(make_check("price_cover", collect([](const RunSummary& r) {
                                  return r.price_cover_pass.value_or(false);
                                }),
                                Rational(1)));
  }
  if (acc.expect_cycle_period) {
    const auto p = *acc.expect_cycle_period;
    checks.push_back(make_check("cycle_period", collect([&](const RunSummary& r) {
                                  return r.cycle_period == p;
                                }),
                                Rational(1)));
  }
  if (acc.expect_converged) {
    const bool want = *acc.expect_converged;
    checks.push_back(make_check("converged", collect([&](const RunSummary& r) {
                                  return r.converged == want;
                                }),
                                Rational(1)));
  }
  if (acc.expect_final_ratio) {
    const Rational want = *acc.expect_final_ratio;
    checks.push_back(make_check("final_ratio", collect([&](const RunSummary& r) {
                                  return r.final_ratio == want;
                                }),
                                Rational(1)));
  }
  if (acc.max_final_regret) {
    const Rational cap = *acc.max_final_regret;
    checks.push_back(make_check("final_regret", collect([&](const RunSummary& r) {
                                  return r.final_regret && *r.final_regret <= cap;
                                }),
                                Rational(1)));
  }
  if (acc.max_regret) {
    const Rational cap = *acc.max_regret;
    checks.push_back(make_check(
        "regret", collect([&](const RunSummary& r) { return r.max_regret <= cap; }),
        acc.min_pass_fraction));
  }
  return checks;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options) {
  const std::vector<RunPlan> plans = plan_runs(config);
  const auto instances = experiment_instances(config);
  std::vector<InstanceFacts> facts(instances.size());
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto it = std::find_if(plans.begin(), plans.end(),
                                 [&](const RunPlan& p) { return p.instance == k; });
    facts[k] = instance_facts(config, instances[k], it->byzantine);
  }
  if (options.out_dir) std::filesystem::create_directories(*options.out_dir);
  auto job = [&](std::size_t k) {
    std::optional<std::filesystem::path> csv;
    if (options.out_dir) csv = *options.out_dir / run_file_name(k);
    return evaluate_run(config, plans[k], facts[plans[k].instance], csv);
  };
  const auto results = options.parallel
                           ? map_replicas<RunSummary>(plans.size(), job)
                           : map_replicas_serial<RunSummary>(plans.size(), job);
  ExperimentResult out;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].value) {
      out.runs.push_back(*results[k].value);
    } else {
      out.errors.push_back("run " + std::to_string(k) + ": " + results[k].error);
    }
  }
  out.checks = evaluate_checks(config, out.runs);
  out.passed = out.errors.empty() &&
               std::all_of(out.checks.begin(), out.checks.end(),
                           [](const CheckResult& c) { return c.passed; });
  return out;
}

nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result) {
  using nlohmann::json;
  json j;
  j["name"] = config.name;
  j["passed"] = result.passed;
  j["runs"] = result.runs.size();
  j["errors"] = result.errors;
  json checks = json::array();
  for (const CheckResult& c : result.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"pass_fraction", rstr(c.pass_fraction)},
                      {"required", rstr(c.required)}});
  }
  j["checks"] = checks;

  std::vector<Rational> ratios;
  bool any_converged = false;
  for (const RunSummary& r : result.runs) {
    ratios.push_back(r.ratio);
    any_converged = any_converged || r.converged.value_or(false);
  }
  const ReplicaStats stats = replica_stats(ratios);
  j["welfare_ratio"] = {{"min", rstr(stats.min)},
                        {"median", rstr(stats.median)},
                        {"max", rstr(stats.max)},
                        {"min_decimal", to_double(stats.min)},
                        {"median_decimal", to_double(stats.median)}};
  if (config.dynamics.kind == DynamicsKind::kBestResponse) {
    j["converged"] = any_converged;
  }
  if (result.runs.size() == 1) {
    const RunSummary& r = result.runs.front();
    j["cycle_period"] = r.cycle_period ? json(*r.cycle_period) : json();
    if (r.final_ratio) j["final_ratio"] = rstr(*r.final_ratio);
    if (r.final_regret) j["final_regret"] = rstr(*r.final_regret);
  }

  json details = json::array();
  for (const RunSummary& r : result.runs) {
    json d;
    d["index"] = r.index;
    d["instance"] = r.instance;
    d["replica"] = r.replica;
    d["seed"] = r.seed;
    d["n"] = r.n;
    d["m"] = r.m;
    d["rounds"] = r.rounds;
    d["optimum"] = r.optimum;
    d["honest_optimum"] = r.honest_optimum;
    d["average_true_welfare"] = rstr(r.average_true);
    d["average_declared_welfare"] = rstr(r.average_declared);
    d["ratio"] = rstr(r.ratio);
    d["ratio_decimal"] = to_double(r.ratio);
    if (r.welfare_threshold) {
      d["welfare_threshold"] = rstr(*r.welfare_threshold);
      d["welfare_pass"] = r.welfare_pass;
    }
    if (!r.regret.empty()) {
      json reg = json::array();
      for (const auto& x : r.regret) reg.push_back(x ? json(rstr(*x)) : json());
      d["regret"] = reg;
      d["max_regret"] = rstr(r.max_regret);
    }
    if (r.separated) d["separated"] = *r.separated;
    if (r.separation_failure) d["separation_failure_round"] = *r.separation_failure;
    auto list = [](const std::vector<Rational>& v) {
      json a = json::array();
      for (const Rational& x : v) a.push_back(rstr(x));
      return a;
    };
    if (!r.step_fraction.empty()) d["step_fraction"] = list(r.step_fraction);
    if (!r.g_fraction.empty()) d["g_fraction"] = list(r.g_fraction);
    if (r.price_cover_pass) {
      d["price_cover_pass"] = *r.price_cover_pass;
      if (r.price_cover_min_slack) d["price_cover_min_slack"] = rstr(*r.price_cover_min_slack);
    }
    if (r.converged) {
      d["converged"] = *r.converged;
      d["cycle_period"] = r.cycle_period ? json(*r.cycle_period) : json();
      d["last_change_round"] = r.last_change;
    }
    if (r.final_ratio) d["final_ratio"] = rstr(*r.final_ratio);
    if (r.final_regret) d["final_regret"] = rstr(*r.final_regret);
    details.push_back(d);
  }
  j["runs_detail"] = details;
  return j;
}

}  // namespace rca
