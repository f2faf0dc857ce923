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

#include "rca/core.hpp"

#include <algorithm>

#include <boost/container_hash/hash.hpp>

namespace rca {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

Bundle Bundle::of(std::initializer_list<int> items) {
  std::uint32_t mask = 0;
  for (int item : items) {
    if (item < 0 || item >= kMaxItems) {
      throw std::invalid_argument("item index out of range");
    }
    mask |= std::uint32_t{1} << item;
  }
  return Bundle(mask);
}

Valuation::Valuation(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& atom : atoms_) {
    if (atom.set.empty()) {
      throw std::invalid_argument("valuation atom with empty bundle");
    }
    if (atom.value <= 0 || atom.value > kMaxBid) {
      throw std::invalid_argument("valuation atom value out of range");
    }
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.set < b.set; });
  auto dup = std::adjacent_find(
      atoms_.begin(), atoms_.end(),
      [](const Atom& a, const Atom& b) { return a.set == b.set; });
  if (dup != atoms_.end()) {
    throw std::invalid_argument("valuation lists the same bundle twice");
  }
}

Value Valuation::value_of(Bundle bundle) const {
  Value best = 0;
  for (const Atom& atom : atoms_) {
    if (bundle.contains(atom.set)) best = std::max(best, atom.value);
  }
  return best;
}

Value Valuation::max_value() const {
  Value best = 0;
  for (const Atom& atom : atoms_) best = std::max(best, atom.value);
  return best;
}

Declaration Declaration::single_minded(Bundle set, Value bid) {
  if (bid < 0 || bid > kMaxBid) {
    throw std::invalid_argument("declared bid out of range");
  }
  Declaration d;
  if (bid == 0 || set.empty()) return d;
  d.set_ = set;
  d.bid_ = bid;
  return d;
}

Outcome empty_outcome(std::size_t n) {
  return Outcome{Allocation(n), std::vector<Value>(n, 0)};
}

bool feasible(std::span<const Bundle> allocation, std::optional<int> cap) {
  std::uint32_t used = 0;
  for (Bundle b : allocation) {
    if (cap && b.size() > *cap) return false;
    if (used & b.mask()) return false;
    used |= b.mask();
  }
  return true;
}

Value social_welfare(std::span<const Bundle> allocation,
                     std::span<const Valuation> types) {
  if (allocation.size() != types.size()) {
    throw FeasibilityError("allocation and type profile differ in length");
  }
  if (!feasible(allocation)) {
    throw FeasibilityError("allocation assigns an item twice");
  }
  Value total = 0;
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    total += types[i].value_of(allocation[i]);
  }
  return total;
}

Value declared_welfare(std::span<const Bundle> allocation,
                       const Profile& profile) {
  Value total = 0;
  for (std::size_t i = 0; i < allocation.size() && i < profile.size(); ++i) {
    if (!allocation[i].empty()) total += profile[i].value_of(allocation[i]);
  }
  return total;
}

std::size_t hash_profile(const Profile& profile, std::size_t seed) {
  for (const Declaration& d : profile) {
    boost::hash_combine(seed, d.set().mask());
    boost::hash_combine(seed, d.bid());
  }
  return seed;
}

}  // namespace rca
