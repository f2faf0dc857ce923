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

// Replica fan-out. Results come back indexed by replica whatever the
// schedule, and an exception in one replica is recorded for that replica
// only.

#ifndef RCA_BATCH_HPP_
#define RCA_BATCH_HPP_

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace rca {

template <class R>
struct ReplicaResult {
  std::optional<R> value;
  std::string error;
};

namespace detail {

template <class R, class F>
ReplicaResult<R> guarded(F& f, std::size_t index) {
  ReplicaResult<R> out;
  try {
    out.value.emplace(f(index));
  } catch (const std::exception& e) {
    out.error = e.what();
  } catch (...) {
    out.error = "unknown exception";
  }
  return out;
}

}  // namespace detail

template <class R, class F>
std::vector<ReplicaResult<R>> map_replicas_serial(std::size_t count, F f) {
  std::vector<ReplicaResult<R>> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = detail::guarded<R>(f, k);
  return out;
}

template <class R, class F>
std::vector<ReplicaResult<R>> map_replicas(std::size_t count, F f) {
  std::vector<ReplicaResult<R>> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    out[k] = detail::guarded<R>(f, static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace rca

#endif  // RCA_BATCH_HPP_
