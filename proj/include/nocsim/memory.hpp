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

#include <deque>
#include <functional>
#include <vector>

#include "nocsim/address.hpp"
#include "nocsim/config.hpp"
#include "nocsim/fabric.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/profiler.hpp"
#include "nocsim/workload.hpp"

namespace nocsim {

// Backing-store content is a pure function of the address, so any reply
// can be checked for bit-exact reassembly: word j of a block holds that
// word's own address.
inline std::uint64_t memory_word(Addr block_address, std::uint32_t word_index,
                                 std::uint32_t word_bytes) {
  return block_address + static_cast<Addr>(word_index) * word_bytes;
}

std::vector<std::uint64_t> memory_block(Addr block_address,
                                        std::uint32_t words_per_block,
                                        std::uint32_t word_bytes);

// Set-associative array with true-LRU and allocate-at-miss reservations.
// Lines are reserved (pending) when the miss is accepted and validated when
// the fill arrives, which keeps content evolution a pure function of the
// per-core access order.
class CacheArray {
 public:
  explicit CacheArray(const CacheGeometry& geom);

  struct Line {
    std::uint64_t tag = 0;
    bool valid = false;
    bool dirty = false;
    bool pending = false;
    std::uint32_t lru = 0;  // 0 = most recent
  };

  const CacheGeometry& geometry() const { return geom_; }

  // Way holding the tag (valid or pending), or -1.
  int find(std::uint32_t set, std::uint64_t tag) const;
  Line& line(std::uint32_t set, int way);
  const Line& line(std::uint32_t set, int way) const;

  void touch(std::uint32_t set, int way);

  // Least-recently-used way that is not pending (invalid ways first).
  // Returns -1 if every way is pending.
  int choose_victim(std::uint32_t set) const;

  // lru values within each set stay a permutation of 0..assoc-1.
  void check_lru_permutation(std::uint32_t set) const;

  std::uint64_t content_fingerprint() const;

 private:
  CacheGeometry geom_;
  std::vector<Line> lines_;
};

using ResumeFn = std::function<void(std::uint64_t req_index, Cycle resume_at)>;

// Private L1 data cache with MSHRs and the critical-flit-aware fill path.
// Misses inject one request packet toward the block's home bank; reply
// flits drive per-requester resume per the active policy.
class L1Controller {
 public:
  L1Controller(const ExperimentConfig& cfg, NodeId node, Mesh& mesh,
               MetricsCollector& metrics, CriticalityHistogram& profile,
               ResumeFn on_resume);

  void push_request(const MemRequest& r);
  void deliver(const Packet* pkt, std::uint32_t seq, Cycle at);
  void tick(Cycle now);

  bool idle() const;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t primary_misses() const { return primary_misses_; }
  std::uint64_t coalesced_misses() const { return coalesced_misses_; }
  std::uint64_t mshr_stall_cycles() const { return mshr_stall_cycles_; }
  std::uint64_t writebacks() const { return writebacks_; }
  std::uint64_t content_fingerprint() const {
    return cache_.content_fingerprint();
  }

 private:
  struct Requester {
    std::uint64_t req_index = 0;
    MemOp op = MemOp::Load;
    std::uint8_t cfi = 0;
    Cycle miss_cycle = 0;
    Cycle resume_cycle = kNoArrival;
  };
  struct MshrEntry {
    bool valid = false;
    Addr block_address = 0;
    std::uint8_t cfi = 0;  // primary requester's
    std::uint32_t set = 0;
    int way = -1;
    Cycle head_arrival = kNoArrival;
    std::vector<Cycle> flit_arrivals;
    std::vector<Requester> requesters;
  };

  int find_mshr(Addr block) const;
  int free_mshr() const;
  void handle_reply_flit(const Packet* pkt, std::uint32_t seq, Cycle at);
  void complete_fill(MshrEntry& entry, Cycle at);
  bool process_request(const MemRequest& r, Cycle now);

  const ExperimentConfig& cfg_;
  NodeId node_;
  Mesh& mesh_;
  MetricsCollector& metrics_;
  CriticalityHistogram& profile_;
  ResumeFn on_resume_;

  CacheArray cache_;
  std::vector<MshrEntry> mshr_;
  std::deque<MemRequest> input_q_;
  std::deque<Mesh::Delivery> inbox_;

  std::uint64_t hits_ = 0;
  std::uint64_t primary_misses_ = 0;
  std::uint64_t coalesced_misses_ = 0;
  std::uint64_t mshr_stall_cycles_ = 0;
  std::uint64_t writebacks_ = 0;
};

// One shared-L2 slice. Block-interleaved across all nodes; set indexing
// uses the bank-local block number so the whole slice is usable.
class L2Bank {
 public:
  L2Bank(const ExperimentConfig& cfg, NodeId node, Mesh& mesh);

  void deliver(const Packet* pkt, std::uint32_t seq, Cycle at);
  void tick(Cycle now);

  bool idle() const { return pending_.empty() && inbox_.empty(); }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::uint64_t writebacks_absorbed() const { return writebacks_absorbed_; }
  std::uint64_t content_fingerprint() const {
    return cache_.content_fingerprint();
  }

 private:
  struct Waiter {
    NodeId requester = 0;
    std::uint8_t cfi = 0;
    Cycle arrive = 0;
  };
  struct PendingFill {
    Addr block_address = 0;
    std::uint32_t set = 0;
    int way = -1;
    Cycle ready_at = kNoArrival;  // flat mode; corner mode waits for the mc reply
    bool mc_requested = false;
    std::vector<Waiter> waiters;
  };

  Addr bank_local_address(Addr block_address) const;
  void send_reply(const Waiter& w, Addr block, Cycle enqueue);
  bool handle_request(const Packet* pkt, Cycle now);
  void handle_mc_reply(const Packet* pkt, std::uint32_t seq, Cycle at);
  NodeId nearest_corner() const;

  const ExperimentConfig& cfg_;
  NodeId node_;
  Mesh& mesh_;
  CacheArray cache_;
  std::vector<PendingFill> pending_;
  std::deque<Mesh::Delivery> inbox_;

  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::uint64_t writebacks_absorbed_ = 0;
};

// Corner-node memory controller (optional routing mode): turns bank
// requests into block replies after the flat memory latency.
class MemoryCtrl {
 public:
  MemoryCtrl(const ExperimentConfig& cfg, NodeId node, Mesh& mesh);

  void deliver(const Packet* pkt, std::uint32_t seq, Cycle at);
  void tick(Cycle now);
  bool idle() const { return pending_.empty(); }

  static std::vector<NodeId> corner_nodes(int mesh_k);

 private:
  struct PendingRead {
    Addr block_address = 0;
    std::uint8_t cfi = 0;
    NodeId bank = 0;
    Cycle ready_at = 0;
  };

  const ExperimentConfig& cfg_;
  NodeId node_;
  Mesh& mesh_;
  std::vector<PendingRead> pending_;
};

}  // namespace nocsim
