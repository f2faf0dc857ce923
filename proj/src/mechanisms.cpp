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

#include "rca/mechanisms.hpp"

#include <algorithm>

namespace rca {

Mechanism Mechanism::ma(AllocationRule rule) {
  Mechanism mech;
  mech.kind = MechanismKind::kMA;
  mech.items = rule.items;
  mech.cap = rule.size_cap.value_or(rule.items);
  mech.rule = std::move(rule);
  return mech;
}

Mechanism Mechanism::msca(int m, int s) {
  if (s < 1) throw std::invalid_argument("MsCA needs a positive size cap");
  Mechanism mech;
  mech.kind = MechanismKind::kMsCA;
  mech.items = m;
  mech.cap = s;
  return mech;
}

Mechanism Mechanism::mca(int m, Rational gamma) {
  if (gamma < 0 || gamma >= 1) {
    throw std::invalid_argument("MCA gamma must lie in [0, 1)");
  }
  Mechanism mech;
  mech.kind = MechanismKind::kMCA;
  mech.items = m;
  mech.cap = ceil_sqrt(m);
  mech.gamma = gamma;
  return mech;
}

std::string Mechanism::name() const {
  switch (kind) {
    case MechanismKind::kMA:
      return "MA(" + (rule ? rule->name : std::string("?")) + ")";
    case MechanismKind::kMsCA:
      return "MsCA(s=" + std::to_string(cap) + ")";
    case MechanismKind::kMCA:
      return "MCA(gamma=" + to_string(gamma) + ")";
  }
  return "?";
}

Declaration simplify(const Valuation& declared) {
  const Atom* best = nullptr;
  // Atoms are stored in Bundle order, so the first maximum is the smallest.
  for (const Atom& atom : declared.atoms()) {
    if (!best || atom.value > best->value) best = &atom;
  }
  if (!best) return Declaration::empty();
  return Declaration::single_minded(best->set, best->value);
}

Profile simplify(std::span<const Valuation> declared) {
  Profile out;
  out.reserve(declared.size());
  for (const Valuation& v : declared) out.push_back(simplify(v));
  return out;
}

SeparationScope separation_scope(const Mechanism& mech) {
  switch (mech.kind) {
    case MechanismKind::kMA:
      return {};
    case MechanismKind::kMsCA:
      return {mech.cap, std::nullopt};
    case MechanismKind::kMCA:
      return {mech.cap, mech.grand()};
  }
  return {};
}

namespace {

// 0 = outside the mechanism's domain, 1 = small-set class, 2 = grand class.
int bid_class(Bundle set, const SeparationScope& scope) {
  if (set.empty()) return 0;
  if (scope.grand && set == *scope.grand) return 2;
  if (scope.cap && set.size() > *scope.cap) return 0;
  return 1;
}

}  // namespace

bool separated_for(const Profile& profile, AgentId i, Value own_value,
                   const SeparationScope& scope) {
  const Declaration& own = profile[i];
  const int cls = bid_class(own.set(), scope);
  if (own.is_empty() || cls == 0) return true;
  Value lower_sum = 0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (static_cast<AgentId>(j) == i) continue;
    const Declaration& d = profile[j];
    if (d.is_empty() || bid_class(d.set(), scope) != cls) continue;
    if (d.set().intersects(own.set()) && d.bid() < own_value) {
      lower_sum += d.bid();
    }
  }
  return lower_sum <= own.bid();
}

std::vector<bool> separated_check(const Profile& profile,
                                  std::span<const Valuation> types,
                                  const SeparationScope& scope) {
  std::vector<bool> out(profile.size(), true);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Value own = types[i].value_of(profile[i].set());
    out[i] = separated_for(profile, static_cast<AgentId>(i), own, scope);
  }
  return out;
}

namespace {

Allocation allocate_msca(std::span<const Bid> bids, int s) {
  BidVector view(bids.begin(), bids.end());
  for (Bid& b : view) {
    if (b.set.size() > s) b = Bid{};
  }
  Allocation out = greedy_sca(view, s);
  Allocation provisional = out;
  for (std::size_t i = 0; i < view.size(); ++i) {
    if (provisional[i].empty()) continue;
    Amount blocking;
    for (std::size_t j = 0; j < view.size(); ++j) {
      if (j != i && !view[j].empty() && view[j].set.intersects(provisional[i])) {
        blocking += view[j].amount;
      }
    }
    if (!(view[i].amount > blocking)) out[i] = Bundle{};
  }
  return out;
}

Allocation allocate_mca(std::span<const Bid> bids, int m, const Coin& coin) {
  const Bundle grand = Bundle::full(m);
  const int k = ceil_sqrt(m);
  BidVector small(bids.begin(), bids.end());
  std::optional<std::size_t> top;
  Amount grand_total;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i].empty()) continue;
    if (bids[i].set == grand) {
      small[i] = Bid{};
      if (coin.ignore_big) continue;
      grand_total += bids[i].amount;
      if (!top || bids[i].amount > bids[*top].amount) top = i;
    } else if (bids[i].set.size() > k) {
      small[i] = Bid{};
    }
  }
  Allocation out = allocate_msca(small, k);
  if (top) {
    const Amount best = bids[*top].amount;
    Amount others = grand_total;
    others.ticks -= best.ticks;
    others.shade -= best.shade;
    if (best > others && best > declared_amount(small, out)) {
      Allocation big(bids.size());
      big[*top] = grand;
      return big;
    }
  }
  return out;
}

}  // namespace

Allocation allocate(const Mechanism& mech, std::span<const Bid> bids,
                    const Coin& coin) {
  switch (mech.kind) {
    case MechanismKind::kMA:
      if (!mech.rule) throw std::invalid_argument("MA without a rule");
      return mech.rule->allocate(bids);
    case MechanismKind::kMsCA:
      return allocate_msca(bids, mech.cap);
    case MechanismKind::kMCA:
      return allocate_mca(bids, mech.items, coin);
  }
  return Allocation(bids.size());
}

CriticalPrice critical_price(const WinPredicate& wins, Value upper) {
  if (upper < 1 || !wins(upper, TieMode::kNatural)) return {};
  Value lose = 0;
  Value win = upper;
  while (win - lose > 1) {
    const Value mid = lose + (win - lose) / 2;
    if (wins(mid, TieMode::kNatural)) {
      win = mid;
    } else {
      lose = mid;
    }
  }
  if (win < upper && !wins(win + 1, TieMode::kNatural)) {
    throw ContractViolation("win predicate is not monotone in the bid");
  }
  if (wins(win, TieMode::kAlwaysLose)) {
    if (win > 1 && wins(win - 1, TieMode::kAlwaysLose)) {
      throw ContractViolation("win predicate is not monotone in the bid");
    }
    return {win - 1, Boundary::kOpen};
  }
  return {win, Boundary::kClosed};
}

bool wins(const Mechanism& mech, const Profile& profile, AgentId i, Bundle set,
          Value bid, TieMode mode, const Coin& coin) {
  if (bid <= 0 || set.empty()) return false;
  BidVector bids = to_bids(profile);
  bids[i] = Bid{set, Amount{bid, mode == TieMode::kAlwaysLose ? 1 : 0}};
  return allocate(mech, bids, coin)[i] == set;
}

CriticalPrice critical_price(const Mechanism& mech, const Profile& profile,
                             AgentId i, Bundle set, const Coin& coin,
                             std::optional<Value> known_win) {
  if (set.empty()) return {0, Boundary::kClosed};
  BidVector bids = to_bids(profile);
  Value upper = 1;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (static_cast<AgentId>(j) != i) upper += profile[j].bid();
  }
  if (known_win) upper = std::min(upper, *known_win);
  auto predicate = [&](Value v, TieMode mode) {
    bids[i] = Bid{set, Amount{v, mode == TieMode::kAlwaysLose ? 1 : 0}};
    return allocate(mech, bids, coin)[i] == set;
  };
  return critical_price(predicate, upper);
}

Outcome run(const Mechanism& mech, const Profile& profile, const Coin& coin) {
  const std::size_t n = profile.size();
  Outcome out = empty_outcome(n);
  if (coin.lottery_agent) {
    const AgentId a = *coin.lottery_agent;
    const Declaration& d = profile[a];
    if (separated_for(profile, a, d.bid(), separation_scope(mech))) {
      out.allocation[a] = mech.grand();
    }
    return out;
  }
  out.allocation = allocate(mech, to_bids(profile), coin);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.allocation[i].empty()) continue;
    const CriticalPrice price =
        critical_price(mech, profile, static_cast<AgentId>(i),
                       out.allocation[i], coin, profile[i].bid());
    out.payments[i] = price.theta;
  }
  return out;
}

Outcome run(const Mechanism& mech, std::span<const Valuation> declared,
            const Coin& coin) {
  return run(mech, simplify(declared), coin);
}

Outcome run_ma(const AllocationRule& rule, const Profile& profile) {
  return run(Mechanism::ma(rule), profile);
}

Outcome run_msca(const Profile& profile, int m, int s) {
  return run(Mechanism::msca(m, s), profile);
}

Outcome run_mca(const Profile& profile, int m, const Coin& coin) {
  return run(Mechanism::mca(m, 0), profile, coin);
}

Value realized_utility(const Mechanism& mech, const Profile& profile,
                       AgentId i, const Valuation& type, const Coin& coin) {
  const Declaration& d = profile[i];
  if (coin.lottery_agent) {
    if (*coin.lottery_agent != i) return 0;
    return separated_for(profile, i, d.bid(), separation_scope(mech))
               ? type.value_of(mech.grand())
               : 0;
  }
  if (d.is_empty()) return 0;
  if (!wins(mech, profile, i, d.set(), d.bid(), TieMode::kNatural, coin)) {
    return 0;
  }
  const CriticalPrice price =
      critical_price(mech, profile, i, d.set(), coin, d.bid());
  return type.value_of(d.set()) - price.theta;
}

Rational expected_utility(const Mechanism& mech, AgentId i,
                          const Declaration& candidate, const Profile& profile,
                          const Valuation& type) {
  Profile p = profile;
  p[i] = candidate;
  Rational main{0};
  if (!candidate.is_empty()) {
    bool coin_matters = false;
    if (mech.kind == MechanismKind::kMCA && mech.gamma > 0) {
      const Bundle grand = mech.grand();
      coin_matters = std::any_of(p.begin(), p.end(), [&](const Declaration& d) {
        return !d.is_empty() && d.set() == grand;
      });
    }
    if (coin_matters) {
      const Value ignored = realized_utility(mech, p, i, type, Coin{true, {}});
      const Value kept = realized_utility(mech, p, i, type, Coin{false, {}});
      main = mech.gamma * ignored + (Rational(1) - mech.gamma) * kept;
    } else {
      main = realized_utility(mech, p, i, type, Coin{});
    }
  }
  if (mech.lottery) {
    const Rational delta = *mech.lottery;
    const Value prize =
        separated_for(p, i, candidate.bid(), separation_scope(mech))
            ? type.value_of(mech.grand())
            : 0;
    main = delta * Rational(prize, static_cast<std::int64_t>(p.size())) +
           (Rational(1) - delta) * main;
  }
  return main;
}

}  // namespace rca
