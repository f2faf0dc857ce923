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

// Domain types shared by every layer: bundles of items, tick-valued
// valuations, single-minded declarations, allocations and outcomes.

#ifndef RCA_CORE_HPP_
#define RCA_CORE_HPP_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace rca {

/// Largest item count a Bundle can represent.
inline constexpr int kMaxItems = 32;

/// Amounts are integer ticks; 1 tick is the smallest value unit.
using Value = std::int64_t;
inline constexpr Value kInfiniteValue = std::numeric_limits<Value>::max();

/// Per-agent bids are capped so that sums over any profile stay far from
/// overflow (n * kMaxBid fits comfortably in 63 bits).
inline constexpr Value kMaxBid = Value{1} << 40;

/// Zero-based agent index. Files and the CLI use 1-based ids.
using AgentId = int;

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);
double to_double(const Rational& r);

class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A subset of the items {0..m-1} as a bitmask.
///
/// Ordering is the "smaller set first" total order used for every
/// tie-break: popcount ascending, then mask value ascending.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint32_t mask) : mask_(mask) {}

  static Bundle of(std::initializer_list<int> items);
  static constexpr Bundle full(int m) {
    return Bundle(m >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << m) - 1));
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  /// True when `other` is a subset of this bundle.
  constexpr bool contains(Bundle other) const {
    return (other.mask_ & ~mask_) == 0;
  }
  constexpr bool intersects(Bundle other) const {
    return (mask_ & other.mask_) != 0;
  }
  constexpr bool fits(int m) const { return (mask_ & ~full(m).mask_) == 0; }

  constexpr Bundle operator|(Bundle o) const { return Bundle(mask_ | o.mask_); }
  constexpr Bundle operator&(Bundle o) const { return Bundle(mask_ & o.mask_); }

  friend constexpr bool operator==(Bundle a, Bundle b) = default;
  friend constexpr std::strong_ordering operator<=>(Bundle a, Bundle b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.mask_ <=> b.mask_;
  }

 private:
  std::uint32_t mask_ = 0;
};

struct Atom {
  Bundle set;
  Value value = 0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// An explicitly listed valuation: the value of T is the largest atom value
/// among atoms contained in T, and 0 if none. Monotone and normalized by
/// construction.
class Valuation {
 public:
  Valuation() = default;
  /// Throws std::invalid_argument on empty-bundle atoms, non-positive or
  /// oversized values, or duplicate bundles.
  explicit Valuation(std::vector<Atom> atoms);

  static Valuation single_minded(Bundle set, Value value) {
    return Valuation({{set, value}});
  }

  Value value_of(Bundle bundle) const;
  Value max_value() const;
  std::span<const Atom> atoms() const { return atoms_; }
  bool is_zero() const { return atoms_.empty(); }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::vector<Atom> atoms_;
};

inline Value value_of(const Valuation& valuation, Bundle bundle) {
  return valuation.value_of(bundle);
}

/// Either Empty or a single-minded bid (S, x) with S non-empty and x >= 1.
/// Zero bids and empty sets canonicalize to Empty.
class Declaration {
 public:
  constexpr Declaration() = default;

  static constexpr Declaration empty() { return {}; }
  /// Throws std::invalid_argument for negative or oversized bids.
  static Declaration single_minded(Bundle set, Value bid);

  constexpr bool is_empty() const { return bid_ == 0; }
  constexpr Bundle set() const { return set_; }
  constexpr Value bid() const { return bid_; }
  /// Declared value of `bundle`: bid if set is contained in it, else 0.
  constexpr Value value_of(Bundle bundle) const {
    return !is_empty() && bundle.contains(set_) ? bid_ : 0;
  }

  friend constexpr bool operator==(Declaration, Declaration) = default;

 private:
  Bundle set_;
  Value bid_ = 0;
};

/// One declaration per agent; the index is the agent identity.
using Profile = std::vector<Declaration>;

/// One bundle per agent, possibly empty.
using Allocation = std::vector<Bundle>;

struct Outcome {
  Allocation allocation;
  std::vector<Value> payments;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

Outcome empty_outcome(std::size_t n);

/// Pairwise disjoint, and when `cap` is set every bundle has at most `cap`
/// items.
bool feasible(std::span<const Bundle> allocation,
              std::optional<int> cap = std::nullopt);

/// Sum of true values of the allocated bundles. Throws FeasibilityError when
/// the allocation overlaps or does not match the number of agents.
Value social_welfare(std::span<const Bundle> allocation,
                     std::span<const Valuation> types);

/// Sum of declared values of the allocated bundles.
Value declared_welfare(std::span<const Bundle> allocation,
                       const Profile& profile);

/// Hash of every (set, bid) pair, for memo tables keyed on profiles.
std::size_t hash_profile(const Profile& profile, std::size_t seed = 0);

}  // namespace rca

#endif  // RCA_CORE_HPP_
