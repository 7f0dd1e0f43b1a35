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

#include "nocsim/router.hpp"

namespace nocsim {

int route_xy(Coord cur, Coord dst, int mesh_k) {
  NOCSIM_CHECK(cur.x >= 0 && cur.x < mesh_k && cur.y >= 0 && cur.y < mesh_k &&
                   dst.x >= 0 && dst.x < mesh_k && dst.y >= 0 && dst.y < mesh_k,
               "coordinates outside the mesh");
  if (dst.x > cur.x) return kPortEast;
  if (dst.x < cur.x) return kPortWest;
  if (dst.y > cur.y) return kPortSouth;
  if (dst.y < cur.y) return kPortNorth;
  return kPortLocal;
}

namespace {

// Distance of a candidate's flattened slot from the pointer, cyclically.
inline int rr_distance(const SwitchCandidate& c, int rr_ptr, int n_vcs) {
  const int slots = kNumPorts * n_vcs;
  const int idx = c.in_port * n_vcs + c.vc;
  return (idx - rr_ptr + slots) % slots;
}

std::size_t pick_rr(std::span<const SwitchCandidate> cands,
                    std::span<const std::size_t> pool, int rr_ptr, int n_vcs) {
  std::size_t best = pool[0];
  int best_dist = rr_distance(cands[best], rr_ptr, n_vcs);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const int d = rr_distance(cands[pool[i]], rr_ptr, n_vcs);
    if (d < best_dist) {
      best = pool[i];
      best_dist = d;
    }
  }
  return best;
}

void advance_past(const SwitchCandidate& winner, int* rr_ptr, int n_vcs) {
  const int slots = kNumPorts * n_vcs;
  *rr_ptr = (winner.in_port * n_vcs + winner.vc + 1) % slots;
}

}  // namespace

std::size_t arbitrate_rr(std::span<const SwitchCandidate> cands, int* rr_ptr,
                         int n_vcs) {
  NOCSIM_CHECK(!cands.empty(), "arbitration with no candidates");
  std::vector<std::size_t> pool(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) pool[i] = i;
  const std::size_t w = pick_rr(cands, pool, *rr_ptr, n_vcs);
  advance_past(cands[w], rr_ptr, n_vcs);
  return w;
}

std::size_t arbitrate_cfi(std::span<const SwitchCandidate> cands, int* rr_ptr,
                          int n_vcs) {
  NOCSIM_CHECK(!cands.empty(), "arbitration with no candidates");
  std::vector<std::size_t> pool;
  pool.reserve(cands.size());
  int best_priority = 0;
  bool have_critical = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!cands[i].critical) continue;
    if (!have_critical || cands[i].priority < best_priority) {
      have_critical = true;
      best_priority = cands[i].priority;
      pool.clear();
    }
    if (cands[i].priority == best_priority) pool.push_back(i);
  }
  if (!have_critical) {
    for (std::size_t i = 0; i < cands.size(); ++i) pool.push_back(i);
  }
  const std::size_t w = pick_rr(cands, pool, *rr_ptr, n_vcs);
  advance_past(cands[w], rr_ptr, n_vcs);
  return w;
}

void update_cfi_counter(VcState& vc, const Packet& pkt, std::uint32_t seq) {
  NOCSIM_CHECK(vc.occupant == pkt.id, "departure from a foreign VC");
  const FlitKind kind = pkt.kind_of(seq);
  if (kind == FlitKind::Head || kind == FlitKind::HeadTail) {
    vc.cfi_counter = pkt.header.cfi;
  } else {
    // Data flit. Counter 0 means this is the critical flit itself.
    if (vc.cfi_counter == 0) {
      vc.critical_passed = true;
    } else {
      vc.cfi_counter -= 1;
    }
    NOCSIM_CHECK(vc.cfi_counter >= 0, "cfi counter underflow");
  }
  if (kind == FlitKind::Tail || kind == FlitKind::HeadTail) {
    NOCSIM_CHECK(vc.buffer.empty(), "tail departed before earlier flits");
    vc.occupant = kNoPacket;
    vc.is_reply = false;
    vc.out_port = -1;
    vc.out_vc = -1;
    vc.va_cycle = 0;
    vc.cfi_counter = 0;
    vc.critical_passed = false;
    vc.sa_losses = 0;
  }
}

}  // namespace nocsim
