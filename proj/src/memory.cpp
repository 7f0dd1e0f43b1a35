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

#include "nocsim/memory.hpp"

#include <algorithm>
#include <cstdlib>

namespace nocsim {

std::vector<std::uint64_t> memory_block(Addr block_address,
                                        std::uint32_t words_per_block,
                                        std::uint32_t word_bytes) {
  std::vector<std::uint64_t> words(words_per_block);
  for (std::uint32_t j = 0; j < words_per_block; ++j) {
    words[j] = memory_word(block_address, j, word_bytes);
  }
  return words;
}

// ---------------------------------------------------------------------------
// CacheArray

CacheArray::CacheArray(const CacheGeometry& geom)
    : geom_(geom),
      lines_(static_cast<std::size_t>(geom.num_sets) * geom.associativity) {
  for (std::uint32_t s = 0; s < geom_.num_sets; ++s) {
    for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
      lines_[static_cast<std::size_t>(s) * geom_.associativity + w].lru = w;
    }
  }
}

int CacheArray::find(std::uint32_t set, std::uint64_t tag) const {
  const std::size_t base = static_cast<std::size_t>(set) * geom_.associativity;
  for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
    const Line& l = lines_[base + w];
    if ((l.valid || l.pending) && l.tag == tag) return static_cast<int>(w);
  }
  return -1;
}

CacheArray::Line& CacheArray::line(std::uint32_t set, int way) {
  return lines_[static_cast<std::size_t>(set) * geom_.associativity + way];
}

const CacheArray::Line& CacheArray::line(std::uint32_t set, int way) const {
  return lines_[static_cast<std::size_t>(set) * geom_.associativity + way];
}

void CacheArray::touch(std::uint32_t set, int way) {
  const std::size_t base = static_cast<std::size_t>(set) * geom_.associativity;
  const std::uint32_t old = lines_[base + way].lru;
  for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
    if (lines_[base + w].lru < old) lines_[base + w].lru += 1;
  }
  lines_[base + way].lru = 0;
}

int CacheArray::choose_victim(std::uint32_t set) const {
  const std::size_t base = static_cast<std::size_t>(set) * geom_.associativity;
  int victim = -1;
  std::uint32_t oldest = 0;
  for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
    const Line& l = lines_[base + w];
    if (l.pending) continue;
    if (!l.valid) return static_cast<int>(w);
    if (victim < 0 || l.lru > oldest) {
      victim = static_cast<int>(w);
      oldest = l.lru;
    }
  }
  return victim;
}

void CacheArray::check_lru_permutation(std::uint32_t set) const {
  const std::size_t base = static_cast<std::size_t>(set) * geom_.associativity;
  std::uint64_t mask = 0;
  for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
    mask |= 1ull << lines_[base + w].lru;
  }
  NOCSIM_CHECK(mask == (geom_.associativity >= 64
                            ? ~0ull
                            : (1ull << geom_.associativity) - 1),
               "lru values are not a permutation");
}

std::uint64_t CacheArray::content_fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  for (const Line& l : lines_) {
    mix(l.tag);
    mix((l.valid ? 1u : 0u) | (l.dirty ? 2u : 0u) | (l.pending ? 4u : 0u));
    mix(l.lru);
  }
  return h;
}

// ---------------------------------------------------------------------------
// L1Controller

L1Controller::L1Controller(const ExperimentConfig& cfg, NodeId node, Mesh& mesh,
                           MetricsCollector& metrics,
                           CriticalityHistogram& profile, ResumeFn on_resume)
    : cfg_(cfg),
      node_(node),
      mesh_(mesh),
      metrics_(metrics),
      profile_(profile),
      on_resume_(std::move(on_resume)),
      cache_(CacheGeometry::make(cfg.l1_size_bytes, cfg.l1_assoc,
                                 cfg.block_bytes(), cfg.word_bytes())),
      mshr_(cfg.mshr_count) {
  for (auto& e : mshr_) e.flit_arrivals.assign(cfg_.data_flits(), kNoArrival);
}

void L1Controller::push_request(const MemRequest& r) { input_q_.push_back(r); }

void L1Controller::deliver(const Packet* pkt, std::uint32_t seq, Cycle at) {
  inbox_.push_back(Mesh::Delivery{pkt, seq, at});
}

int L1Controller::find_mshr(Addr block) const {
  for (std::size_t i = 0; i < mshr_.size(); ++i) {
    if (mshr_[i].valid && mshr_[i].block_address == block) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int L1Controller::free_mshr() const {
  for (std::size_t i = 0; i < mshr_.size(); ++i) {
    if (!mshr_[i].valid) return static_cast<int>(i);
  }
  return -1;
}

void L1Controller::handle_reply_flit(const Packet* pkt, std::uint32_t seq,
                                     Cycle at) {
  const int idx = find_mshr(pkt->header.block_address);
  NOCSIM_CHECK(idx >= 0, "reply flit without a matching MSHR entry");
  MshrEntry& e = mshr_[idx];

  if (seq == 0) {
    e.head_arrival = at;
    return;
  }
  const std::uint32_t d = seq - 1;  // data flit index
  NOCSIM_CHECK(d < e.flit_arrivals.size(), "reply flit index out of range");
  NOCSIM_CHECK(e.flit_arrivals[d] == kNoArrival, "duplicate reply flit");
  e.flit_arrivals[d] = at;

  // Early restart: the moment a requester's critical flit lands in the
  // fill buffer, the core resumes without waiting for the whole block.
  if (cfg_.policy != Policy::Baseline) {
    for (auto& req : e.requesters) {
      if (req.op == MemOp::Load && req.cfi == d &&
          req.resume_cycle == kNoArrival) {
        req.resume_cycle = at;
        on_resume_(req.req_index, at);
      }
    }
  }
  if (seq + 1 == pkt->num_flits) {
    complete_fill(e, at);
    mesh_.release_packet(pkt->id);
  }
}

void L1Controller::complete_fill(MshrEntry& e, Cycle at) {
  CacheArray::Line& line = cache_.line(e.set, e.way);
  NOCSIM_CHECK(line.pending && line.tag ==
                   decompose_address(e.block_address, cache_.geometry()).tag,
               "fill into a non-reserved way");
  line.pending = false;
  line.valid = true;

  for (auto& req : e.requesters) {
    if (req.op == MemOp::Store) {
      line.dirty = true;
      continue;
    }
    if (req.resume_cycle == kNoArrival) {  // baseline waits for the block
      req.resume_cycle = at;
      on_resume_(req.req_index, at);
    }
    MissRecord rec;
    rec.core_id = static_cast<std::uint32_t>(node_);
    rec.block_address = e.block_address;
    rec.cfi = req.cfi;
    rec.miss_cycle = req.miss_cycle;
    rec.head_arrival = e.head_arrival;
    rec.flit_arrivals = e.flit_arrivals;
    rec.critical_arrival = e.flit_arrivals[req.cfi];
    rec.fill_complete = at;
    rec.resume_cycle = req.resume_cycle;
    metrics_.add_record(rec);
  }

  e.valid = false;
  e.requesters.clear();
  e.head_arrival = kNoArrival;
  std::fill(e.flit_arrivals.begin(), e.flit_arrivals.end(), kNoArrival);
}

bool L1Controller::process_request(const MemRequest& r, Cycle now) {
  const CacheGeometry& g = cache_.geometry();
  const DecomposedAddress da = decompose_address(r.address, g);
  const std::uint8_t cfi = static_cast<std::uint8_t>(
      critical_flit_index(da.block_offset, cfg_.flit_payload_bytes()));

  const int way = cache_.find(da.set_index, da.tag);
  if (way >= 0 && cache_.line(da.set_index, way).valid) {
    // Hit: the critical word comes straight out of the data array.
    cache_.touch(da.set_index, way);
    if (r.op == MemOp::Store) {
      cache_.line(da.set_index, way).dirty = true;
    } else {
      on_resume_(r.index, now + cfg_.l1_hit_latency);
    }
    hits_ += 1;
    return true;
  }

  if (way >= 0) {
    // Block already in flight: coalesce into the existing entry.
    const int m = find_mshr(da.block_address);
    NOCSIM_CHECK(m >= 0, "pending line without an MSHR entry");
    MshrEntry& e = mshr_[m];
    cache_.touch(da.set_index, way);
    Requester req{r.index, r.op, cfi, now, kNoArrival};
    if (r.op == MemOp::Load && cfg_.policy != Policy::Baseline &&
        e.flit_arrivals[cfi] != kNoArrival) {
      // The critical word is already in the fill buffer.
      req.resume_cycle = now;
      on_resume_(r.index, now);
    }
    e.requesters.push_back(req);
    coalesced_misses_ += 1;
    return true;
  }

  // New miss: needs a free MSHR and a victim way.
  const int m = free_mshr();
  const int victim = m >= 0 ? cache_.choose_victim(da.set_index) : -1;
  if (m < 0 || victim < 0) {
    mshr_stall_cycles_ += 1;
    return false;
  }

  CacheArray::Line& line = cache_.line(da.set_index, victim);
  if (line.valid && line.dirty) {
    // Writeback of the victim block, fire-and-forget.
    DecomposedAddress vic{line.tag, da.set_index, 0, 0};
    const Addr victim_addr = recompose_address(vic, g);
    const NodeId home = static_cast<NodeId>(
        map_bank(victim_addr, g.block_bytes, cfg_.cores()));
    Packet wb = make_request(node_, home, victim_addr, 0);
    wb.header.writeback = true;
    mesh_.inject(node_, std::move(wb), now + cfg_.l1_hit_latency);
    writebacks_ += 1;
  }
  line.tag = da.tag;
  line.valid = false;
  line.dirty = false;
  line.pending = true;
  cache_.touch(da.set_index, victim);
  cache_.check_lru_permutation(da.set_index);

  MshrEntry& e = mshr_[m];
  e.valid = true;
  e.block_address = da.block_address;
  e.cfi = cfi;
  e.set = da.set_index;
  e.way = victim;
  e.requesters.push_back(Requester{r.index, r.op, cfi, now, kNoArrival});

  if (r.op == MemOp::Load) profile_.record_miss(da.block_offset, g.word_bytes);
  primary_misses_ += 1;

  const NodeId home = static_cast<NodeId>(
      map_bank(da.block_address, g.block_bytes, cfg_.cores()));
  // CFI computation runs beside the tag check, so the request leaves after
  // the same lookup latency a hit would pay.
  mesh_.inject(node_, make_request(node_, home, da.block_address, cfi),
               now + cfg_.l1_hit_latency);
  return true;
}

void L1Controller::tick(Cycle now) {
  while (!inbox_.empty()) {
    const Mesh::Delivery d = inbox_.front();
    inbox_.pop_front();
    handle_reply_flit(d.pkt, d.seq, d.at);
  }
  if (!input_q_.empty() && process_request(input_q_.front(), now)) {
    input_q_.pop_front();
  }
}

bool L1Controller::idle() const {
  if (!input_q_.empty() || !inbox_.empty()) return false;
  for (const auto& e : mshr_) {
    if (e.valid) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// L2Bank

L2Bank::L2Bank(const ExperimentConfig& cfg, NodeId node, Mesh& mesh)
    : cfg_(cfg),
      node_(node),
      mesh_(mesh),
      cache_(CacheGeometry::make(cfg.l2_size_bytes, cfg.l2_assoc,
                                 cfg.block_bytes(), cfg.word_bytes())) {}

Addr L2Bank::bank_local_address(Addr block_address) const {
  const std::uint64_t block = block_address / cfg_.block_bytes();
  return (block / cfg_.cores()) * cfg_.block_bytes();
}

NodeId L2Bank::nearest_corner() const {
  const auto corners = MemoryCtrl::corner_nodes(static_cast<int>(cfg_.mesh_k));
  const Coord me = coord_of(node_, static_cast<int>(cfg_.mesh_k));
  NodeId best = corners.front();
  int best_d = 1 << 30;
  for (NodeId c : corners) {
    const Coord cc = coord_of(c, static_cast<int>(cfg_.mesh_k));
    const int d = std::abs(me.x - cc.x) + std::abs(me.y - cc.y);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

void L2Bank::deliver(const Packet* pkt, std::uint32_t seq, Cycle at) {
  inbox_.push_back(Mesh::Delivery{pkt, seq, at});
}

void L2Bank::send_reply(const Waiter& w, Addr block, Cycle enqueue) {
  Packet reply = packetize_reply(
      memory_block(block, cfg_.words_per_block, cfg_.word_bytes()), w.cfi,
      node_, w.requester, block, cfg_.words_per_flit());
  reply.header.unit = UnitTag::Core;
  mesh_.inject(node_, std::move(reply), enqueue);
}

bool L2Bank::handle_request(const Packet* pkt, Cycle now) {
  if (pkt->header.writeback) {
    // No coherence below this point: the writeback is traffic only.
    writebacks_absorbed_ += 1;
    mesh_.release_packet(pkt->id);
    return true;
  }
  const Addr block = pkt->header.block_address;
  const Waiter w{pkt->header.src, pkt->header.cfi, now};
  const DecomposedAddress da =
      decompose_address(bank_local_address(block), cache_.geometry());
  const int way = cache_.find(da.set_index, da.tag);

  if (way >= 0 && cache_.line(da.set_index, way).valid) {
    cache_.touch(da.set_index, way);
    hits_ += 1;
    send_reply(w, block, now + cfg_.l2_hit_latency);
    mesh_.release_packet(pkt->id);
    return true;
  }
  if (way >= 0) {
    // Fetch already in progress for this block.
    for (auto& p : pending_) {
      if (p.block_address == block) {
        p.waiters.push_back(w);
        mesh_.release_packet(pkt->id);
        return true;
      }
    }
    NOCSIM_CHECK(false, "pending L2 line without a pending fill");
  }

  const int victim = cache_.choose_victim(da.set_index);
  if (victim < 0) return false;  // every way mid-fill; retry next cycle
  misses_ += 1;
  CacheArray::Line& line = cache_.line(da.set_index, victim);
  line.tag = da.tag;
  line.valid = false;
  line.dirty = false;
  line.pending = true;
  cache_.touch(da.set_index, victim);

  PendingFill fill;
  fill.block_address = block;
  fill.set = da.set_index;
  fill.way = victim;
  fill.waiters.push_back(w);
  if (cfg_.mem_route_corners) {
    fill.mc_requested = true;
    Packet req = make_request(node_, nearest_corner(), block, pkt->header.cfi);
    req.header.unit = UnitTag::Mc;
    mesh_.inject(node_, std::move(req), now + cfg_.l2_hit_latency);
  } else {
    fill.ready_at = now + cfg_.l2_hit_latency + cfg_.memory_latency;
  }
  pending_.push_back(std::move(fill));
  mesh_.release_packet(pkt->id);
  return true;
}

void L2Bank::handle_mc_reply(const Packet* pkt, std::uint32_t seq, Cycle at) {
  if (seq + 1 != pkt->num_flits) return;  // wait for the tail
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    if (pending_[i].block_address == pkt->header.block_address &&
        pending_[i].mc_requested) {
      pending_[i].ready_at = at;
      mesh_.release_packet(pkt->id);
      return;
    }
  }
  NOCSIM_CHECK(false, "memory reply without a pending fill");
}

void L2Bank::tick(Cycle now) {
  while (!inbox_.empty()) {
    const Mesh::Delivery d = inbox_.front();
    if (d.pkt->header.cls == MsgClass::Request) {
      if (!handle_request(d.pkt, now)) break;  // set mid-fill, retry later
    } else {
      handle_mc_reply(d.pkt, d.seq, d.at);
    }
    inbox_.pop_front();
  }

  for (std::size_t i = 0; i < pending_.size();) {
    PendingFill& p = pending_[i];
    if (p.ready_at == kNoArrival || p.ready_at > now) {
      ++i;
      continue;
    }
    CacheArray::Line& line = cache_.line(p.set, p.way);
    line.pending = false;
    line.valid = true;
    for (const Waiter& w : p.waiters) {
      send_reply(w, p.block_address,
                 std::max(w.arrive + cfg_.l2_hit_latency, p.ready_at));
    }
    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

// ---------------------------------------------------------------------------
// MemoryCtrl

MemoryCtrl::MemoryCtrl(const ExperimentConfig& cfg, NodeId node, Mesh& mesh)
    : cfg_(cfg), node_(node), mesh_(mesh) {}

std::vector<NodeId> MemoryCtrl::corner_nodes(int mesh_k) {
  return {node_of({0, 0}, mesh_k), node_of({mesh_k - 1, 0}, mesh_k),
          node_of({0, mesh_k - 1}, mesh_k),
          node_of({mesh_k - 1, mesh_k - 1}, mesh_k)};
}

void MemoryCtrl::deliver(const Packet* pkt, std::uint32_t seq, Cycle at) {
  (void)seq;
  pending_.push_back(PendingRead{pkt->header.block_address, pkt->header.cfi,
                                 pkt->header.src, at + cfg_.memory_latency});
  mesh_.release_packet(pkt->id);
}

void MemoryCtrl::tick(Cycle now) {
  for (std::size_t i = 0; i < pending_.size();) {
    if (pending_[i].ready_at > now) {
      ++i;
      continue;
    }
    const PendingRead r = pending_[i];
    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(i));
    Packet reply = packetize_reply(
        memory_block(r.block_address, cfg_.words_per_block, cfg_.word_bytes()),
        r.cfi, node_, r.bank, r.block_address, cfg_.words_per_flit());
    reply.header.unit = UnitTag::Bank;
    mesh_.inject(node_, std::move(reply), now);
  }
}

}  // namespace nocsim
