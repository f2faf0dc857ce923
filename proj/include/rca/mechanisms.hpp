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

// The strategic layer. Every mechanism first collapses declarations to
// single-minded bids, then allocates, then charges each winner the critical
// price of the composed mechanism: the infimum bid on its set that still
// wins, holding everyone else fixed.
//
//   MA    run a monotone allocation rule as-is.
//   MsCA  greedy s-CA, then drop every provisional winner whose bid does not
//         strictly exceed the sum of the other bids intersecting its set.
//   MCA   MsCA with s = ceil(sqrt(m)) on small sets, overridden by the top
//         grand-bundle bid when that bid strictly beats both the other
//         grand-bundle bids combined and the small-set declared welfare.
//         With probability gamma the grand-bundle bids are ignored.
//
// Thresholds live on the integer tick grid. A winner's price is reported as
// (theta, open) when every real bid above theta wins, and (theta, closed)
// when theta itself is the smallest winning bid; either way the payment is
// theta.

#ifndef RCA_MECHANISMS_HPP_
#define RCA_MECHANISMS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rca/algorithms.hpp"
#include "rca/core.hpp"

namespace rca {

enum class MechanismKind { kMA, kMsCA, kMCA };

struct Mechanism {
  MechanismKind kind = MechanismKind::kMA;
  int items = 0;
  /// s for MsCA, ceil_sqrt(items) for MCA, the rule's cap (if any) for MA.
  int cap = 0;
  std::optional<AllocationRule> rule;
  /// Probability of ignoring grand-bundle bids (MCA only), in [0, 1).
  Rational gamma{0};
  /// Probability of the separated-lottery branch, in [0, 1), when enabled.
  std::optional<Rational> lottery;

  static Mechanism ma(AllocationRule rule);
  static Mechanism msca(int m, int s);
  static Mechanism mca(int m, Rational gamma);

  Bundle grand() const { return Bundle::full(items); }
  std::string name() const;
};

/// Per-round randomness of a mechanism. A round outcome is a deterministic
/// function of (profile, coin).
struct Coin {
  bool ignore_big = false;
  std::optional<AgentId> lottery_agent;
  friend bool operator==(const Coin&, const Coin&) = default;
};

/// Single-minded bid for an argmax bundle, smaller bundles first on ties.
Declaration simplify(const Valuation& declared);
Profile simplify(std::span<const Valuation> declared);

/// Which bids a mechanism considers when testing separation. MsCA ignores
/// bids above its cap; MCA compares grand-bundle bids only with each other
/// and small-set bids only with each other.
struct SeparationScope {
  std::optional<int> cap;
  std::optional<Bundle> grand;
};
SeparationScope separation_scope(const Mechanism& mech);

/// Separation for agent i with the threshold `own_value` standing in for
/// t_i(S_i): the other in-scope bids intersecting S_i and strictly below
/// own_value sum to at most d_i(S_i). Empty declarations are separated.
bool separated_for(const Profile& profile, AgentId i, Value own_value,
                   const SeparationScope& scope = {});

/// Per-agent separation using true values for the Q threshold.
std::vector<bool> separated_check(const Profile& profile,
                                  std::span<const Valuation> types,
                                  const SeparationScope& scope = {});

/// Allocation of the composed mechanism on possibly shaded bids. Lottery
/// coins are not handled here; see run().
Allocation allocate(const Mechanism& mech, std::span<const Bid> bids,
                    const Coin& coin = {});

enum class TieMode { kNatural, kAlwaysLose };
enum class Boundary { kOpen, kClosed };

struct CriticalPrice {
  Value theta = kInfiniteValue;
  Boundary boundary = Boundary::kClosed;

  bool reachable() const { return theta != kInfiniteValue; }
  bool wins_at(Value bid) const {
    if (!reachable()) return false;
    return boundary == Boundary::kOpen ? bid > theta : bid >= theta;
  }
  friend bool operator==(const CriticalPrice&, const CriticalPrice&) = default;
};

/// Win predicate: does the agent win its set bidding `value` ticks, with
/// ties resolved naturally or always against it.
using WinPredicate = std::function<bool(Value, TieMode)>;

/// Binary search for the minimal winning tick k in [1, upper] under natural
/// ties. If the agent still wins k when every tie goes against it, the win
/// region includes the open interval below k and the result is (k - 1,
/// open); otherwise (k, closed). Unreachable when `upper` itself loses.
/// Throws ContractViolation when the predicate is seen to be non-monotone.
CriticalPrice critical_price(const WinPredicate& wins, Value upper);

/// Whether agent i wins `set` bidding `bid` against the rest of `profile`.
bool wins(const Mechanism& mech, const Profile& profile, AgentId i, Bundle set,
          Value bid, TieMode mode = TieMode::kNatural, const Coin& coin = {});

/// Critical price of agent i for `set` against the rest of `profile`.
/// `known_win` is a bid already known to win, which bounds the search.
CriticalPrice critical_price(const Mechanism& mech, const Profile& profile,
                             AgentId i, Bundle set, const Coin& coin = {},
                             std::optional<Value> known_win = std::nullopt);

Outcome run(const Mechanism& mech, const Profile& profile,
            const Coin& coin = {});
Outcome run(const Mechanism& mech, std::span<const Valuation> declared,
            const Coin& coin = {});

Outcome run_ma(const AllocationRule& rule, const Profile& profile);
Outcome run_msca(const Profile& profile, int m, int s);
Outcome run_mca(const Profile& profile, int m, const Coin& coin);

/// Utility of agent i for its declaration in `profile` on one coin:
/// t_i(S) - theta when the declaration wins S, and 0 otherwise.
Value realized_utility(const Mechanism& mech, const Profile& profile,
                       AgentId i, const Valuation& type, const Coin& coin = {});

/// Exact expectation of agent i's utility over the mechanism's coin when it
/// declares `candidate` and the others declare as in `profile`.
Rational expected_utility(const Mechanism& mech, AgentId i,
                          const Declaration& candidate, const Profile& profile,
                          const Valuation& type);

}  // namespace rca

#endif  // RCA_MECHANISMS_HPP_
