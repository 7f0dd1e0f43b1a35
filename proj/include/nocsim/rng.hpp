/*
 * Copyright 2026 The nocsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string_view>

#include "nocsim/types.hpp"

namespace nocsim {

// Seeded, platform-independent random stream (splitmix64). Each simulation
// component gets its own stream, derived from (seed, stream_id), so that
// the draw sequence of one component never depends on another.
class RngStream {
 public:
  RngStream() : state_(0x9e3779b97f4a7c15ULL) {}
  RngStream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t next_u64();

  // Uniform over [0, bound). bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound);

  // Uniform over [0, 1).
  double next_double();

 private:
  std::uint64_t state_;
};

}  // namespace nocsim
