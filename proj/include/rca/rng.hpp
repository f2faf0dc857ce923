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

#ifndef RCA_RNG_HPP_
#define RCA_RNG_HPP_

#include <cstdint>
#include <random>

#include "rca/core.hpp"

namespace rca {

/// Seeded generator with platform-independent draws. std::mt19937_64 is
/// bit-exact everywhere; the standard distributions are not, so the draws
/// are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1) with 53 bits.
  double unit();
  /// True with probability p, exactly, for rational p in [0, 1].
  bool bernoulli(const Rational& p);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream from (seed, stream id) with a SplitMix64
/// finalizer, so streams of one run and of different replicas never share
/// a state.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

}  // namespace rca

#endif  // RCA_RNG_HPP_
