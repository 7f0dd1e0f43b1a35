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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/core.hpp"
#include "nocsim/fabric.hpp"
#include "nocsim/memory.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/profiler.hpp"
#include "nocsim/trace.hpp"

namespace nocsim {

struct RunSummary {
  Cycle cycles = 0;
  bool completed = false;
};

struct RunOptions {
  std::optional<Cycle> cycle_limit;
  std::string flit_trace_path;  // empty: no trace
  std::string miss_dump_path;   // empty: no per-miss dump
};

// One fully wired simulation: cores, private L1s, the mesh, L2 banks and
// (optionally) corner memory controllers, advanced in a fixed phase order
// each cycle: cores, L1 controllers, routers in row-major order, L2
// controllers, then bookkeeping. A (config, seed) pair reproduces a run
// bit for bit.
class System {
 public:
  explicit System(const ExperimentConfig& cfg, const RunOptions& opt = {});
  ~System();

  System(const System&) = delete;
  System& operator=(const System&) = delete;

  RunSummary run();

  // Valid after run().
  const RunStats& stats() const { return stats_; }
  const CriticalityHistogram& histogram() const { return profile_; }

  Mesh& mesh() { return *mesh_; }
  std::uint64_t l1_content_fingerprint() const;
  std::uint64_t l2_content_fingerprint() const;

 private:
  void dispatch_deliveries(Cycle now);
  bool complete() const;

  ExperimentConfig cfg_;
  RunOptions opt_;
  std::unique_ptr<FlitTraceWriter> trace_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<MetricsCollector> collector_;
  CriticalityHistogram profile_;
  std::vector<std::unique_ptr<CoreModel>> cores_;
  std::vector<std::unique_ptr<L1Controller>> l1s_;
  std::vector<std::unique_ptr<L2Bank>> l2s_;
  std::vector<std::unique_ptr<MemoryCtrl>> mcs_;  // corner mode only
  std::vector<int> mc_index_;                     // node -> mcs_ slot or -1

  RunStats stats_;
  bool ran_ = false;
};

// Timing-free replay of the workload against the L1 arrays only; returns
// the same critical-word histogram a full run would produce, fast enough
// for million-request profiling.
CriticalityHistogram profile_workload(const ExperimentConfig& cfg);

}  // namespace nocsim
