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

#include <array>
#include <deque>
#include <memory>
#include <unordered_map>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/packet.hpp"
#include "nocsim/router.hpp"
#include "nocsim/trace.hpp"

namespace nocsim {

// The k x k mesh: credit-based virtual-channel wormhole routers with a
// 2-stage pipeline behind 1-cycle links, plus one network interface per
// node (FIFO injection queue, unbounded ejection queue).
//
// Timing model (all defaults):
//   - a packet enqueued at the NI during cycle c has its first flit
//     buffered at the local router during c+1 (one injection-link cycle);
//   - stage 1 (buffer write + route compute + VC allocation) runs in the
//     arrival cycle, stage 2 (switch allocation + traversal) one cycle
//     later, and the link delivers the flit to the next hop or NI
//     link_cycles after traversal;
//   - zero-load head latency over h = (manhattan distance + 1) links is
//     h * (router_stages + link_cycles) + 1 cycles from NI enqueue, and a
//     full packet adds (num_flits - 1) serialization cycles.
class Mesh {
 public:
  struct Delivery {
    const Packet* pkt = nullptr;
    std::uint32_t seq = 0;
    Cycle at = 0;  // consumable at cycles >= at
  };

  Mesh(const ExperimentConfig& cfg, FlitTraceWriter* trace);

  // Hands a packet to the node's NI during `enqueue_cycle`. Returns its id.
  PacketId inject(NodeId node, Packet pkt, Cycle enqueue_cycle);

  // Consumers pop entries whose `at` has been reached, then release the
  // packet once its tail is consumed.
  std::deque<Delivery>& ejection_queue(NodeId node);
  bool ejection_queues_empty() const;
  void release_packet(PacketId id);

  void tick(Cycle now);

  int mesh_k() const { return static_cast<int>(cfg_.mesh_k); }
  std::uint64_t flits_injected() const { return flits_injected_; }
  std::uint64_t flits_ejected() const { return flits_ejected_; }
  std::uint64_t packets_injected() const { return packets_injected_; }
  std::uint64_t packets_in_flight() const { return in_flight_; }
  std::uint64_t activity() const { return activity_; }
  const FlitLatencyHistogram& flit_latency() const { return flit_latency_; }

  // Test hook: a blocked NI refuses ejection grants (models a stalled
  // consumer so backpressure and the watchdog can be exercised).
  void set_ejection_blocked(NodeId node, bool blocked);

  // Zero-load head latency from NI enqueue to NI delivery, for oracles.
  Cycle zero_load_head_latency(NodeId src, NodeId dst) const;

 private:
  struct InFlightFlit {
    const Packet* pkt = nullptr;
    std::uint32_t seq = 0;
    int vc = 0;
    Cycle at = 0;
  };
  struct CreditMsg {
    int vc = 0;
    Cycle at = 0;
  };
  struct OutVcView {
    PacketId allocated_to = kNoPacket;
    std::uint32_t credits = 0;
    bool draining = false;
  };
  struct OutputPort {
    bool connected = false;
    NodeId peer = 0;
    int peer_port = 0;
    int rr_ptr = 0;
    std::vector<OutVcView> vcs;
    std::deque<CreditMsg> credits_incoming;
  };
  struct InputPort {
    std::vector<VcState> vcs;
    std::deque<InFlightFlit> incoming;
  };
  struct RouterNode {
    Coord coords;
    std::array<InputPort, kNumPorts> in;
    std::array<OutputPort, kNumPorts> out;
  };
  struct NiState {
    struct PendingPacket {
      Packet* pkt = nullptr;
      Cycle enqueue = 0;
    };
    std::deque<PendingPacket> inject_q;
    std::uint32_t next_seq = 0;
    int active_vc = -1;
    Cycle next_eligible = 0;
    std::deque<Delivery> eject_q;
    bool eject_blocked = false;
  };

  void receive_credits(RouterNode& r, Cycle now);
  void receive_flits(RouterNode& r, Cycle now);
  void pull_injection(NodeId node, Cycle now);
  void allocate_vcs(RouterNode& r, Cycle now);
  void switch_allocate(NodeId node, Cycle now);
  void buffer_write(RouterNode& r, int port, int vc, const Packet* pkt,
                    std::uint32_t seq, Cycle now);

  ExperimentConfig cfg_;
  bool cfi_arbitration_ = false;
  FlitTraceWriter* trace_ = nullptr;

  std::vector<RouterNode> routers_;
  std::vector<NiState> nis_;
  std::unordered_map<PacketId, std::unique_ptr<Packet>> live_;
  PacketId next_packet_id_ = 0;

  std::uint64_t flits_injected_ = 0;
  std::uint64_t flits_ejected_ = 0;
  std::uint64_t packets_injected_ = 0;
  std::uint64_t in_flight_ = 0;
  std::uint64_t activity_ = 0;
  FlitLatencyHistogram flit_latency_;

  // scratch for switch allocation
  std::vector<SwitchCandidate> cands_;
  std::vector<VcState*> cand_vcs_;
  std::vector<bool> cand_intrinsic_;
};

}  // namespace nocsim
