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
#include <deque>
#include <span>
#include <vector>

#include "nocsim/packet.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// Dimension-order routing: resolve x first, then y, then eject.
int route_xy(Coord cur, Coord dst, int mesh_k);

// One switch-allocation contender. in_port/vc give its round-robin slot;
// `critical` and `priority` drive the cfi policy (priority is the current
// counter value, or the header cfi for head flits).
struct SwitchCandidate {
  int in_port = 0;
  int vc = 0;
  bool critical = false;
  int priority = 0;
};

// Round-robin pick over the flattened (in_port, vc) index space. Returns
// the position in `cands` of the first candidate at or after *rr_ptr and
// advances the pointer just past the winner.
std::size_t arbitrate_rr(std::span<const SwitchCandidate> cands, int* rr_ptr,
                         int n_vcs);

// Two-class pick: critical candidates strictly beat non-critical ones;
// within the critical class the lowest priority value wins (ties fall back
// to round-robin), the non-critical class is plain round-robin.
std::size_t arbitrate_cfi(std::span<const SwitchCandidate> cands, int* rr_ptr,
                          int n_vcs);

inline constexpr Cycle kNoCycle = ~Cycle{0};

// A flit sitting in an input VC buffer.
struct BufferedFlit {
  const Packet* pkt = nullptr;
  std::uint32_t seq = 0;
  Cycle buffered_at = 0;
};

// Per-(input port, VC) state. One packet occupies a VC from the cycle its
// head is buffered until its tail departs; the cfi counter tracks how many
// data flits still precede the critical one.
struct VcState {
  std::deque<BufferedFlit> buffer;
  PacketId occupant = kNoPacket;
  bool is_reply = false;

  int out_port = -1;  // route computation result
  int out_vc = -1;    // downstream VC granted to the occupant head
  Cycle va_cycle = 0;

  int cfi_counter = 0;
  bool critical_passed = false;

  std::uint32_t sa_losses = 0;  // consecutive lost arbitrations

  bool idle() const { return occupant == kNoPacket && buffer.empty(); }
};

// Counter bookkeeping applied when `departing` wins switch allocation from
// this VC. Head departures load the counter from the header; data-flit
// departures either mark the critical flit as passed (counter already 0)
// or decrement. Tail departures tear the occupancy down.
void update_cfi_counter(VcState& vc, const Packet& pkt, std::uint32_t seq);

}  // namespace nocsim
