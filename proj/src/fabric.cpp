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

#include "nocsim/fabric.hpp"

#include <cstdlib>

namespace nocsim {

namespace {

int opposite(int port) {
  switch (port) {
    case kPortNorth: return kPortSouth;
    case kPortSouth: return kPortNorth;
    case kPortEast: return kPortWest;
    case kPortWest: return kPortEast;
    default: return kPortLocal;
  }
}

}  // namespace

Mesh::Mesh(const ExperimentConfig& cfg, FlitTraceWriter* trace)
    : cfg_(cfg),
      cfi_arbitration_(cfg.policy == Policy::EarlyRestartNoc),
      trace_(trace) {
  const int k = mesh_k();
  routers_.resize(static_cast<std::size_t>(k) * k);
  nis_.resize(routers_.size());
  for (NodeId n = 0; n < routers_.size(); ++n) {
    RouterNode& r = routers_[n];
    r.coords = coord_of(n, k);
    for (int p = 0; p < kNumPorts; ++p) {
      r.in[p].vcs.resize(cfg_.n_vcs);
    }
    auto connect = [&](int port, int dx, int dy) {
      const Coord peer{r.coords.x + dx, r.coords.y + dy};
      if (peer.x < 0 || peer.x >= k || peer.y < 0 || peer.y >= k) return;
      OutputPort& op = r.out[port];
      op.connected = true;
      op.peer = node_of(peer, k);
      op.peer_port = opposite(port);
      op.vcs.assign(cfg_.n_vcs, OutVcView{kNoPacket, cfg_.vc_buffer_depth, false});
    };
    connect(kPortNorth, 0, -1);
    connect(kPortSouth, 0, 1);
    connect(kPortEast, 1, 0);
    connect(kPortWest, -1, 0);
    // Local output is the ejection link; it needs no VC bookkeeping.
  }
}

PacketId Mesh::inject(NodeId node, Packet pkt, Cycle enqueue_cycle) {
  NOCSIM_CHECK(node < nis_.size(), "injection at a node outside the mesh");
  NOCSIM_CHECK(pkt.header.dst < nis_.size(), "destination outside the mesh");
  if (pkt.header.cls == MsgClass::Request) {
    NOCSIM_CHECK(pkt.num_flits == 1, "request packets are single-flit");
  } else {
    NOCSIM_CHECK(pkt.num_flits == 1 + cfg_.data_flits() &&
                     pkt.payload.size() == cfg_.words_per_block,
                 "reply packet shape mismatch");
  }
  pkt.id = next_packet_id_++;
  pkt.inject_cycle = enqueue_cycle;
  pkt.eject_cursor = 0;
  const PacketId id = pkt.id;
  auto owned = std::make_unique<Packet>(std::move(pkt));
  nis_[node].inject_q.push_back({owned.get(), enqueue_cycle});
  live_.emplace(id, std::move(owned));
  packets_injected_ += 1;
  in_flight_ += 1;
  activity_ += 1;
  return id;
}

std::deque<Mesh::Delivery>& Mesh::ejection_queue(NodeId node) {
  return nis_[node].eject_q;
}

bool Mesh::ejection_queues_empty() const {
  for (const auto& ni : nis_) {
    if (!ni.eject_q.empty()) return false;
  }
  return true;
}

void Mesh::release_packet(PacketId id) {
  auto it = live_.find(id);
  NOCSIM_CHECK(it != live_.end(), "release of an unknown packet");
  NOCSIM_CHECK(it->second->eject_cursor == it->second->num_flits,
               "release of a packet still in flight");
  live_.erase(it);
}

void Mesh::set_ejection_blocked(NodeId node, bool blocked) {
  nis_[node].eject_blocked = blocked;
}

Cycle Mesh::zero_load_head_latency(NodeId src, NodeId dst) const {
  const Coord a = coord_of(src, mesh_k());
  const Coord b = coord_of(dst, mesh_k());
  const Cycle links = static_cast<Cycle>(std::abs(a.x - b.x) +
                                         std::abs(a.y - b.y)) + 1;
  return links * (cfg_.router_stages + cfg_.link_cycles) + 1;
}

void Mesh::receive_credits(RouterNode& r, Cycle now) {
  for (int p = 0; p < kNumPorts; ++p) {
    OutputPort& op = r.out[p];
    while (!op.credits_incoming.empty() && op.credits_incoming.front().at <= now) {
      const CreditMsg c = op.credits_incoming.front();
      op.credits_incoming.pop_front();
      OutVcView& ov = op.vcs[c.vc];
      ov.credits += 1;
      NOCSIM_CHECK(ov.credits <= cfg_.vc_buffer_depth, "credit overflow");
      if (ov.draining && ov.credits == cfg_.vc_buffer_depth) {
        ov.allocated_to = kNoPacket;
        ov.draining = false;
      }
    }
  }
}

void Mesh::buffer_write(RouterNode& r, int port, int vc, const Packet* pkt,
                        std::uint32_t seq, Cycle now) {
  VcState& st = r.in[port].vcs[vc];
  NOCSIM_CHECK(st.buffer.size() < cfg_.vc_buffer_depth,
               "VC buffer overflow (flow control breach)");
  const FlitKind kind = pkt->kind_of(seq);
  if (kind == FlitKind::Head || kind == FlitKind::HeadTail) {
    NOCSIM_CHECK(st.idle(), "head flit into a busy VC");
    st.occupant = pkt->id;
    st.is_reply = pkt->is_reply();
    st.cfi_counter = 0;
    st.critical_passed = false;
    st.sa_losses = 0;
    st.out_port = route_xy(r.coords, coord_of(pkt->header.dst, mesh_k()),
                           mesh_k());
    if (st.out_port == kPortLocal) {
      st.out_vc = 0;  // ejection needs no downstream VC
      st.va_cycle = now;
    } else {
      st.out_vc = -1;
    }
  } else {
    NOCSIM_CHECK(st.occupant == pkt->id, "body flit in a foreign VC");
  }
  st.buffer.push_back(BufferedFlit{pkt, seq, now});
}

void Mesh::receive_flits(RouterNode& r, Cycle now) {
  for (int p = 0; p < kNumPorts; ++p) {
    auto& q = r.in[p].incoming;
    while (!q.empty() && q.front().at <= now) {
      const InFlightFlit f = q.front();
      q.pop_front();
      buffer_write(r, p, f.vc, f.pkt, f.seq, now);
    }
  }
}

void Mesh::pull_injection(NodeId node, Cycle now) {
  NiState& ni = nis_[node];
  if (ni.inject_q.empty()) return;
  auto& front = ni.inject_q.front();
  const Cycle eligible = std::max(front.enqueue + 1, ni.next_eligible);
  if (now < eligible) return;

  RouterNode& r = routers_[node];
  InputPort& lp = r.in[kPortLocal];
  int vc = ni.active_vc;
  if (ni.next_seq == 0) {
    vc = -1;
    for (std::uint32_t v = 0; v < cfg_.n_vcs; ++v) {
      if (lp.vcs[v].idle()) {
        vc = static_cast<int>(v);
        break;
      }
    }
    if (vc < 0) return;  // all local VCs busy
    ni.active_vc = vc;
  }
  VcState& st = lp.vcs[vc];
  if (st.buffer.size() >= cfg_.vc_buffer_depth) return;  // backpressure

  buffer_write(r, kPortLocal, vc, front.pkt, ni.next_seq, now);
  flits_injected_ += 1;
  activity_ += 1;
  ni.next_eligible = now + 1;
  ni.next_seq += 1;
  if (ni.next_seq == front.pkt->num_flits) {
    ni.inject_q.pop_front();
    ni.next_seq = 0;
    ni.active_vc = -1;
  }
}

void Mesh::allocate_vcs(RouterNode& r, Cycle now) {
  for (int p = 0; p < kNumPorts; ++p) {
    for (std::uint32_t v = 0; v < cfg_.n_vcs; ++v) {
      VcState& st = r.in[p].vcs[v];
      if (st.occupant == kNoPacket || st.out_vc >= 0 || st.buffer.empty()) {
        continue;
      }
      // Head flit waiting for a downstream VC. Atomic allocation: only a
      // fully drained VC may be granted, so packets never share a buffer.
      OutputPort& op = r.out[st.out_port];
      for (std::uint32_t d = 0; d < cfg_.n_vcs; ++d) {
        OutVcView& ov = op.vcs[d];
        if (ov.allocated_to == kNoPacket && !ov.draining) {
          ov.allocated_to = st.occupant;
          st.out_vc = static_cast<int>(d);
          st.va_cycle = now;
          break;
        }
      }
    }
  }
}

void Mesh::switch_allocate(NodeId node, Cycle now) {
  RouterNode& r = routers_[node];
  NiState& ni = nis_[node];
  const int n_vcs = static_cast<int>(cfg_.n_vcs);
  const Cycle stage1_span = cfg_.router_stages - 1;

  for (int o = 0; o < kNumPorts; ++o) {
    if (o != kPortLocal && !r.out[o].connected) continue;
    cands_.clear();
    cand_vcs_.clear();
    cand_intrinsic_.clear();

    for (int p = 0; p < kNumPorts; ++p) {
      for (int v = 0; v < n_vcs; ++v) {
        VcState& st = r.in[p].vcs[v];
        if (st.buffer.empty() || st.out_port != o) continue;
        const BufferedFlit& f = st.buffer.front();
        const bool is_head = (f.seq == 0);
        Cycle ready = f.buffered_at + stage1_span;
        if (is_head) {
          if (st.out_vc < 0) continue;  // still in VC allocation
          ready = std::max(ready, st.va_cycle + 1);
        }
        if (now < ready) continue;
        if (o != kPortLocal) {
          if (r.out[o].vcs[st.out_vc].credits == 0) continue;
        } else if (ni.eject_blocked) {
          continue;
        }
        const bool intrinsic = st.is_reply && !st.critical_passed;
        SwitchCandidate c;
        c.in_port = p;
        c.vc = v;
        c.priority = is_head ? static_cast<int>(f.pkt->header.cfi)
                             : st.cfi_counter;
        c.critical = intrinsic;
        if (cfi_arbitration_) {
          if (cfg_.disable_critical_class) c.critical = false;
          if (cfg_.starvation_promote_after > 0 &&
              st.sa_losses >= cfg_.starvation_promote_after) {
            c.critical = true;
            c.priority = -1;
          }
        }
        cands_.push_back(c);
        cand_vcs_.push_back(&st);
        cand_intrinsic_.push_back(intrinsic);
      }
    }
    if (cands_.empty()) continue;

    const std::size_t w =
        cfi_arbitration_ ? arbitrate_cfi(cands_, &r.out[o].rr_ptr, n_vcs)
                         : arbitrate_rr(cands_, &r.out[o].rr_ptr, n_vcs);

    if (trace_) {
      auto record = [&](char kind, std::size_t i) {
        const VcState& st = *cand_vcs_[i];
        const BufferedFlit& f = st.buffer.front();
        FlitTraceRecord rec;
        rec.kind = kind;
        rec.cycle = now;
        rec.router = node;
        rec.in_port = cands_[i].in_port;
        rec.vc = cands_[i].vc;
        rec.out_port = o;
        rec.packet = f.pkt->id;
        rec.seq = f.seq;
        rec.counter = f.seq == 0 ? static_cast<int>(f.pkt->header.cfi)
                                 : st.cfi_counter;
        rec.critical = cand_intrinsic_[i];
        trace_->append(rec);
      };
      if (cands_.size() >= 2) {
        for (std::size_t i = 0; i < cands_.size(); ++i) record('R', i);
      }
      record('W', w);
    }

    for (std::size_t i = 0; i < cands_.size(); ++i) {
      if (i != w) cand_vcs_[i]->sa_losses += 1;
    }

    VcState& st = *cand_vcs_[w];
    const BufferedFlit f = st.buffer.front();
    const int in_port = cands_[w].in_port;
    const int in_vc = cands_[w].vc;
    const int out_vc = st.out_vc;
    st.buffer.pop_front();
    st.sa_losses = 0;
    update_cfi_counter(st, *f.pkt, f.seq);

    if (in_port != kPortLocal) {
      // 1-cycle credit return to the upstream router.
      RouterNode& up = routers_[r.out[in_port].peer];
      up.out[opposite(in_port)].credits_incoming.push_back(
          CreditMsg{in_vc, now + 1});
    }

    const FlitKind kind = f.pkt->kind_of(f.seq);
    const bool is_tail = kind == FlitKind::Tail || kind == FlitKind::HeadTail;
    const Cycle deliver_at = now + 1 + cfg_.link_cycles;
    if (o != kPortLocal) {
      OutputPort& op = r.out[o];
      OutVcView& ov = op.vcs[out_vc];
      NOCSIM_CHECK(ov.credits > 0, "switch traversal without credit");
      ov.credits -= 1;
      if (is_tail) ov.draining = true;
      routers_[op.peer].in[op.peer_port].incoming.push_back(
          InFlightFlit{f.pkt, f.seq, out_vc, deliver_at});
    } else {
      NOCSIM_CHECK(f.pkt->header.dst == node, "ejection at the wrong node");
      Packet& owned = *live_.at(f.pkt->id);
      NOCSIM_CHECK(owned.eject_cursor == f.seq, "out-of-order ejection");
      owned.eject_cursor += 1;
      ni.eject_q.push_back(Delivery{f.pkt, f.seq, deliver_at});
      flits_ejected_ += 1;
      flit_latency_.record(deliver_at - f.pkt->inject_cycle);
      if (is_tail) {
        NOCSIM_CHECK(in_flight_ > 0, "ejection without an in-flight packet");
        in_flight_ -= 1;
      }
    }
    activity_ += 1;
  }
}

void Mesh::tick(Cycle now) {
  for (NodeId n = 0; n < routers_.size(); ++n) {
    RouterNode& r = routers_[n];
    receive_credits(r, now);
    receive_flits(r, now);
    pull_injection(n, now);
    allocate_vcs(r, now);
    switch_allocate(n, now);
  }
}

}  // namespace nocsim
