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
#include <stdexcept>
#include <string>

namespace nocsim {

using Cycle = std::uint64_t;
using Addr = std::uint64_t;
using NodeId = std::uint32_t;
using PacketId = std::uint64_t;

inline constexpr PacketId kNoPacket = ~PacketId{0};

enum class Policy { Baseline, EarlyRestart, EarlyRestartNoc };

enum class MsgClass : std::uint8_t { Request, Reply };

enum class FlitKind : std::uint8_t { Head, Body, Tail, HeadTail };

enum class MemOp : std::uint8_t { Load, Store };

// Mesh coordinates: x is the column, y is the row. Node ids are row-major
// (id = y * k + x), which is also the router update order.
struct Coord {
  int x = 0;
  int y = 0;
  bool operator==(const Coord&) const = default;
};

inline NodeId node_of(Coord c, int k) {
  return static_cast<NodeId>(c.y * k + c.x);
}

inline Coord coord_of(NodeId n, int k) {
  return Coord{static_cast<int>(n) % k, static_cast<int>(n) / k};
}

// Router ports, fixed order used by round-robin arbitration and iteration.
enum Port : int {
  kPortNorth = 0,
  kPortSouth = 1,
  kPortEast = 2,
  kPortWest = 3,
  kPortLocal = 4,
};
inline constexpr int kNumPorts = 5;

const char* port_name(int port);
const char* policy_name(Policy p);

// Configuration problems: bad keys, violated invariants, missing files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant (flow control, MSHR, counter state).
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// The simulation made no progress for the configured number of cycles
// while undelivered packets remained.
struct WatchdogError : std::runtime_error {
  explicit WatchdogError(const std::string& what) : std::runtime_error(what) {}
};

#define NOCSIM_CHECK(cond, msg)                                             \
  do {                                                                      \
    if (!(cond)) {                                                          \
      throw ::nocsim::InternalError(std::string(msg) + " [" #cond "] at " + \
                                    __FILE__ + ":" +                        \
                                    std::to_string(__LINE__));              \
    }                                                                       \
  } while (0)

}  // namespace nocsim
