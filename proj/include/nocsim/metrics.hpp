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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

struct ExperimentConfig;

inline constexpr Cycle kNoArrival = ~Cycle{0};

// Timeline of one L1 load miss, as observed at the requesting core's NI.
struct MissRecord {
  std::uint32_t core_id = 0;
  Addr block_address = 0;
  std::uint8_t cfi = 0;          // this requester's critical flit index
  Cycle miss_cycle = 0;          // L1 access that missed
  Cycle head_arrival = 0;
  std::vector<Cycle> flit_arrivals;  // data flits B0..T in seq order
  Cycle critical_arrival = 0;
  Cycle fill_complete = 0;
  Cycle resume_cycle = 0;        // per the policy of the run
};

// Reply Difference Time: last flit arrival minus first flit arrival.
Cycle rdt(const MissRecord& rec);

struct PenaltyPair {
  Cycle stall = 0;  // miss to core resume (what restart policies shrink)
  Cycle fill = 0;   // miss to full-block install
};

// Both miss-penalty readings for one record under a given policy.
PenaltyPair miss_penalty(const MissRecord& rec, Policy policy);

// Latency histogram with fixed-width buckets plus an overflow bucket.
struct FlitLatencyHistogram {
  static constexpr Cycle kBucketWidth = 4;
  static constexpr std::size_t kBuckets = 64;

  std::array<std::uint64_t, kBuckets + 1> buckets{};
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  Cycle max = 0;

  void record(Cycle latency);
  double mean() const;
  // Nonzero buckets as `lo:count` pairs joined by ';' (overflow as `256+:n`).
  std::string compact() const;
};

struct RunStats {
  std::uint32_t schema_version = 1;
  std::string policy_label;
  std::uint64_t seed = 0;
  Cycle total_cycles = 0;
  bool completed = false;

  std::uint64_t requests = 0;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t l1_hits = 0;
  std::uint64_t l1_load_misses = 0;  // one per load miss record
  std::uint64_t coalesced_misses = 0;
  std::uint64_t mshr_stall_cycles = 0;

  std::uint64_t packets_injected = 0;
  std::uint64_t flits_injected = 0;
  std::uint64_t flits_ejected = 0;

  std::uint64_t rdt_count = 0;
  Cycle rdt_min = 0;
  Cycle rdt_max = 0;
  double rdt_mean = 0.0;

  double stall_penalty_mean = 0.0;
  double fill_penalty_mean = 0.0;
  std::uint64_t stall_penalty_total = 0;
  std::uint64_t fill_penalty_total = 0;

  std::vector<std::uint64_t> per_core_stall;
  FlitLatencyHistogram flit_latency;

  std::uint64_t workload_fingerprint = 0;
};

// Streams per-miss records into aggregates (and optionally to a
// line-delimited dump file for offline recomputation).
class MetricsCollector {
 public:
  MetricsCollector(Policy policy, std::uint32_t data_flits);
  ~MetricsCollector();

  void open_dump(const std::string& path);
  void add_record(const MissRecord& rec);

  std::uint64_t records() const { return records_; }

  // Fills the record-derived fields of `stats`.
  void finish(RunStats& stats) const;

 private:
  Policy policy_;
  std::uint32_t data_flits_;
  std::uint64_t records_ = 0;
  std::uint64_t rdt_sum_ = 0;
  Cycle rdt_min_ = kNoArrival;
  Cycle rdt_max_ = 0;
  std::uint64_t stall_sum_ = 0;
  std::uint64_t fill_sum_ = 0;
  std::unique_ptr<std::ofstream> dump_;
  std::string dump_path_;
};

// ExecTime_base / ExecTime_prop over runs of the same workload and seed.
// Refuses mismatched workload fingerprints.
double speedup(const RunStats& base, const RunStats& prop);

enum class ReportFormat { Csv, Json };

// Single-run report. The config key=value dump is embedded so the report
// is reproducible from itself.
std::string emit_stats(const RunStats& stats, ReportFormat fmt,
                       const std::string& config_kv_text);

struct ComparisonReport {
  std::vector<RunStats> runs;       // baseline first if present
  std::string config_kv_text;
};

// Multi-policy report with per-metric columns normalized to the first run
// and a speedup column.
std::string emit_comparison(const ComparisonReport& rep, ReportFormat fmt);

}  // namespace nocsim
