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

#include "rca/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "rca/oracle.hpp"

namespace rca {

namespace {

void check_sizes(const Trace& trace, std::span<const Valuation> types) {
  for (const RoundRecord& r : trace.rounds) {
    if (r.profile.size() != types.size()) {
      throw std::invalid_argument("trace and instance differ in agent count");
    }
  }
}

Rational average(Value total, std::size_t rounds) {
  if (rounds == 0) return Rational(0);
  return Rational(total, static_cast<std::int64_t>(rounds));
}

}  // namespace

WelfareReport welfare_report(const Trace& trace,
                             std::span<const Valuation> types, Value optimum) {
  check_sizes(trace, types);
  WelfareReport report;
  report.optimum = optimum;
  Value total = 0;
  Value declared = 0;
  for (const RoundRecord& r : trace.rounds) {
    report.series.push_back(r.true_sw);
    total += r.true_sw;
    declared += r.declared_sw;
  }
  report.average_true = average(total, trace.rounds.size());
  report.average_declared = average(declared, trace.rounds.size());
  report.ratio = optimum == 0 ? Rational(1) : report.average_true / optimum;
  return report;
}

RegretReport regret_report(const Trace& trace) {
  RegretReport report;
  bool any = false;
  for (const AgentFeedback& fb : trace.feedback) {
    if (!fb.tracked || fb.rounds == 0) {
      report.regret.emplace_back();
      report.best_candidate.emplace_back();
      continue;
    }
    const auto best = std::max_element(fb.candidate_totals.begin(),
                                       fb.candidate_totals.end());
    const Rational r =
        external_regret(fb.candidate_totals, fb.actual_total, fb.rounds);
    report.regret.push_back(r);
    report.best_candidate.push_back(
        static_cast<std::size_t>(best - fb.candidate_totals.begin()));
    if (!any || r > report.max_regret) report.max_regret = r;
    any = true;
  }
  return report;
}

Value intersecting_bids(const Profile& profile, AgentId i, Bundle target) {
  Value total = 0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (static_cast<AgentId>(j) == i || profile[j].is_empty()) continue;
    if (profile[j].set().intersects(target)) total += profile[j].bid();
  }
  return total;
}

GMembership g_membership(const Trace& trace, std::span<const Valuation> types,
                         std::span<const Bundle> optimal) {
  check_sizes(trace, types);
  const std::size_t n = types.size();
  GMembership g;
  g.member.assign(n, std::vector<bool>(trace.rounds.size()));
  g.fraction.assign(n, Rational(0));
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const Profile& d = trace.rounds[t].profile;
    for (std::size_t i = 0; i < n; ++i) {
      const Value target = types[i].value_of(optimal[i]);
      const Value blocking =
          intersecting_bids(d, static_cast<AgentId>(i), optimal[i]);
      g.member[i][t] = 2 * blocking > target || 2 * d[i].bid() >= target;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto in = std::count(g.member[i].begin(), g.member[i].end(), true);
    g.fraction[i] = average(in, trace.rounds.size());
  }
  return g;
}

std::vector<Rational> step_fractions(const Trace& trace,
                                     std::span<const Valuation> types,
                                     std::span<const Bundle> optimal) {
  check_sizes(trace, types);
  const std::size_t n = types.size();
  std::vector<Value> hits(n, 0);
  for (const RoundRecord& r : trace.rounds) {
    for (std::size_t i = 0; i < n; ++i) {
      const Value target = types[i].value_of(optimal[i]);
      const Value blocking =
          intersecting_bids(r.profile, static_cast<AgentId>(i), optimal[i]);
      if (2 * blocking >= target || 2 * r.profile[i].bid() >= target) {
        ++hits[i];
      }
    }
  }
  std::vector<Rational> out;
  for (Value h : hits) out.push_back(average(h, trace.rounds.size()));
  return out;
}

WelfareReport resilience_report(const Trace& trace,
                                std::span<const Valuation> types,
                                std::span<const AgentId> byzantine, int m,
                                std::optional<int> cap) {
  std::vector<Valuation> honest(types.begin(), types.end());
  for (AgentId b : byzantine) honest.at(b) = Valuation();
  const Value restricted = optimal_allocation(honest, m, cap).welfare;
  return welfare_report(trace, types, restricted);
}

PriceCoverResult price_cover_check(const Trace& trace, std::span<const Valuation> types,
                          std::span<const Bundle> optimal, AgentId i,
                          const Mechanism& mech, const Rational& regret) {
  check_sizes(trace, types);
  const Value target = types[i].value_of(optimal[i]);
  struct Key {
    Profile profile;
    Coin coin;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hash_profile(k.profile, k.coin.ignore_big);
    }
  };
  std::unordered_map<Key, Value, KeyHash> capped;
  Value total = 0;
  for (const RoundRecord& r : trace.rounds) {
    total += types[i].value_of(r.outcome.allocation[i]);
    if (optimal[i].empty()) continue;
    Key key{r.profile, r.coin};
    key.profile[i] = Declaration::empty();
    auto it = capped.find(key);
    if (it == capped.end()) {
      const CriticalPrice p =
          critical_price(mech, key.profile, i, optimal[i], r.coin);
      it = capped.emplace(std::move(key), std::min(target, p.theta)).first;
    }
    total += it->second;
  }
  PriceCoverResult out;
  out.lhs = average(total, trace.rounds.size());
  out.rhs = Rational(target) - regret;
  out.slack = out.lhs - out.rhs;
  out.pass = out.lhs >= out.rhs;
  return out;
}

SeparationReport separation_report(const Trace& trace,
                                   std::span<const Valuation> types,
                                   const SeparationScope& scope,
                                   std::int64_t skip) {
  check_sizes(trace, types);
  SeparationReport report;
  for (const RoundRecord& r : trace.rounds) {
    if (r.round <= skip) continue;
    ++report.rounds;
    const auto sep = separated_check(r.profile, types, scope);
    if (std::all_of(sep.begin(), sep.end(), [](bool b) { return b; })) {
      ++report.separated;
    } else if (!report.first_failure) {
      report.first_failure = r.round;
    }
  }
  return report;
}

std::int64_t separation_warmup(int n) {
  Rational harmonic;
  for (int k = 1; k <= n; ++k) harmonic += Rational(1, k);
  const Rational coupons = harmonic * n;
  const auto ceil = coupons.numerator() / coupons.denominator() +
                    (coupons.denominator() == 1 ? 0 : 1);
  return 2 * ceil;
}

ReplicaStats replica_stats(std::vector<Rational> values) {
  ReplicaStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  std::sort(values.begin(), values.end());
  stats.min = values.front();
  stats.max = values.back();
  stats.median = values[(values.size() - 1) / 2];
  return stats;
}

Rational fraction_at_least(std::span<const Rational> values,
                           const Rational& threshold) {
  if (values.empty()) return Rational(1);
  const auto hits = std::count_if(values.begin(), values.end(),
                                  [&](const Rational& v) { return v >= threshold; });
  return Rational(hits, static_cast<std::int64_t>(values.size()));
}

}  // namespace rca
