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

#include "nocsim/sim.hpp"

#include <algorithm>

namespace nocsim {

System::System(const ExperimentConfig& cfg, const RunOptions& opt)
    : cfg_(cfg),
      opt_(opt),
      profile_(cfg.words_per_block, cfg.words_per_flit()) {
  cfg_.validate();
  if (!opt_.flit_trace_path.empty()) {
    trace_ = std::make_unique<FlitTraceWriter>(opt_.flit_trace_path);
  }
  mesh_ = std::make_unique<Mesh>(cfg_, trace_.get());
  collector_ = std::make_unique<MetricsCollector>(cfg_.policy, cfg_.data_flits());
  if (!opt_.miss_dump_path.empty()) collector_->open_dump(opt_.miss_dump_path);

  const std::uint32_t n = cfg_.cores();
  std::vector<std::vector<MemRequest>> trace_reqs;
  if (cfg_.workload.kind == WorkloadKind::Trace) {
    trace_reqs = load_trace(cfg_.workload.trace_path, n);
  }

  mc_index_.assign(n, -1);
  for (NodeId node = 0; node < n; ++node) {
    l1s_.push_back(std::make_unique<L1Controller>(
        cfg_, node, *mesh_, *collector_, profile_,
        [this, node](std::uint64_t req_index, Cycle resume_at) {
          cores_[node]->on_resume(req_index, resume_at);
        }));
    l2s_.push_back(std::make_unique<L2Bank>(cfg_, node, *mesh_));
    auto stream = make_request_stream(
        cfg_, node,
        cfg_.workload.kind == WorkloadKind::Trace ? std::move(trace_reqs[node])
                                                  : std::vector<MemRequest>{});
    cores_.push_back(std::make_unique<CoreModel>(cfg_, node, std::move(stream)));
  }
  if (cfg_.mem_route_corners) {
    for (NodeId c : MemoryCtrl::corner_nodes(mesh_->mesh_k())) {
      mc_index_[c] = static_cast<int>(mcs_.size());
      mcs_.push_back(std::make_unique<MemoryCtrl>(cfg_, c, *mesh_));
    }
  }
}

System::~System() = default;

void System::dispatch_deliveries(Cycle now) {
  const std::uint32_t n = cfg_.cores();
  for (NodeId node = 0; node < n; ++node) {
    auto& q = mesh_->ejection_queue(node);
    while (!q.empty() && q.front().at <= now) {
      const Mesh::Delivery d = q.front();
      q.pop_front();
      switch (d.pkt->header.unit) {
        case UnitTag::Core:
          l1s_[node]->deliver(d.pkt, d.seq, d.at);
          break;
        case UnitTag::Bank:
          l2s_[node]->deliver(d.pkt, d.seq, d.at);
          break;
        case UnitTag::Mc: {
          const int m = mc_index_[node];
          NOCSIM_CHECK(m >= 0, "memory request at a non-corner node");
          mcs_[m]->deliver(d.pkt, d.seq, d.at);
          break;
        }
      }
    }
  }
}

bool System::complete() const {
  if (mesh_->packets_in_flight() != 0) return false;
  for (const auto& c : cores_) {
    if (!c->done()) return false;
  }
  for (const auto& l1 : l1s_) {
    if (!l1->idle()) return false;
  }
  for (const auto& l2 : l2s_) {
    if (!l2->idle()) return false;
  }
  for (const auto& mc : mcs_) {
    if (!mc->idle()) return false;
  }
  return mesh_->ejection_queues_empty();
}

RunSummary System::run() {
  NOCSIM_CHECK(!ran_, "System::run called twice");
  ran_ = true;

  Cycle now = 0;
  RunSummary summary;
  std::uint64_t last_sig = ~0ull;
  Cycle last_change = 0;

  while (true) {
    if (complete()) {
      summary.cycles = now;
      summary.completed = true;
      break;
    }
    if (opt_.cycle_limit && now >= *opt_.cycle_limit) {
      summary.cycles = now;
      summary.completed = false;
      break;
    }

    dispatch_deliveries(now);
    for (NodeId i = 0; i < cfg_.cores(); ++i) cores_[i]->tick(now, *l1s_[i]);
    for (auto& l1 : l1s_) l1->tick(now);
    mesh_->tick(now);
    for (auto& l2 : l2s_) l2->tick(now);
    for (auto& mc : mcs_) mc->tick(now);

    std::uint64_t sig = mesh_->activity();
    for (const auto& c : cores_) sig += c->requests_issued();
    sig += collector_->records();
    if (sig != last_sig) {
      last_sig = sig;
      last_change = now;
    } else if (now - last_change >= cfg_.watchdog_idle_cycles &&
               mesh_->packets_in_flight() > 0) {
      throw WatchdogError(
          "no flit movement and no core progress for " +
          std::to_string(now - last_change) + " cycles with " +
          std::to_string(mesh_->packets_in_flight()) +
          " undelivered packets at cycle " + std::to_string(now));
    }
    ++now;
  }

  // Conservation must hold on every completed run.
  NOCSIM_CHECK(mesh_->flits_injected() == mesh_->flits_ejected() ||
                   !summary.completed,
               "flit conservation violated");

  stats_ = RunStats{};
  stats_.policy_label = policy_name(cfg_.policy);
  stats_.seed = cfg_.seed;
  stats_.total_cycles = summary.cycles;
  stats_.completed = summary.completed;
  stats_.workload_fingerprint = cfg_.workload_fingerprint();
  for (const auto& c : cores_) {
    stats_.requests += c->requests_issued();
    stats_.loads += c->loads_issued();
    stats_.stores += c->stores_issued();
    stats_.per_core_stall.push_back(c->stall_cycles());
  }
  for (const auto& l1 : l1s_) {
    stats_.l1_hits += l1->hits();
    stats_.coalesced_misses += l1->coalesced_misses();
    stats_.mshr_stall_cycles += l1->mshr_stall_cycles();
  }
  stats_.packets_injected = mesh_->packets_injected();
  stats_.flits_injected = mesh_->flits_injected();
  stats_.flits_ejected = mesh_->flits_ejected();
  stats_.flit_latency = mesh_->flit_latency();
  collector_->finish(stats_);

  if (trace_) trace_->flush();
  return summary;
}

std::uint64_t System::l1_content_fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& l1 : l1s_) {
    h ^= l1->content_fingerprint();
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t System::l2_content_fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& l2 : l2s_) {
    h ^= l2->content_fingerprint();
    h *= 0x100000001b3ULL;
  }
  return h;
}

CriticalityHistogram profile_workload(const ExperimentConfig& cfg) {
  cfg.validate();
  CriticalityHistogram hist(cfg.words_per_block, cfg.words_per_flit());
  const CacheGeometry geom = CacheGeometry::make(
      cfg.l1_size_bytes, cfg.l1_assoc, cfg.block_bytes(), cfg.word_bytes());

  std::vector<std::vector<MemRequest>> trace_reqs;
  if (cfg.workload.kind == WorkloadKind::Trace) {
    trace_reqs = load_trace(cfg.workload.trace_path, cfg.cores());
  }

  // Private L1s never interact, so each core's stream can be replayed to
  // completion on its own. Install on miss, touch on hit: the same content
  // evolution the timed simulation produces.
  for (std::uint32_t core = 0; core < cfg.cores(); ++core) {
    CacheArray cache(geom);
    auto stream = make_request_stream(
        cfg, core,
        cfg.workload.kind == WorkloadKind::Trace ? std::move(trace_reqs[core])
                                                 : std::vector<MemRequest>{});
    while (auto r = stream->next()) {
      const DecomposedAddress da = decompose_address(r->address, geom);
      const int way = cache.find(da.set_index, da.tag);
      if (way >= 0) {
        cache.touch(da.set_index, way);
        if (r->op == MemOp::Store) cache.line(da.set_index, way).dirty = true;
        continue;
      }
      const int victim = cache.choose_victim(da.set_index);
      CacheArray::Line& line = cache.line(da.set_index, victim);
      line.tag = da.tag;
      line.valid = true;
      line.pending = false;
      line.dirty = r->op == MemOp::Store;
      cache.touch(da.set_index, victim);
      if (r->op == MemOp::Load) {
        hist.record_miss(da.block_offset, geom.word_bytes);
      }
    }
  }
  return hist;
}

}  // namespace nocsim
