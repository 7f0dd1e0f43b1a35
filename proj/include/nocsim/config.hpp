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
#include <string>

#include "nocsim/types.hpp"

namespace nocsim {

enum class WorkloadKind { Strided, Uniform, Profile, Hotspot, Trace };
enum class CoreMode { OpenLoop, ClosedLoop };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::Uniform;
  std::uint64_t count_per_core = 1000;

  // strided
  Addr base = 0;
  std::uint64_t stride = 64;

  // uniform / profile / hotspot footprint
  Addr region_base = 0;
  std::uint64_t region_bytes = 1ull << 24;

  // profile
  std::string profile_name;              // Table-style preset row name
  std::array<double, 8> weights{};       // word-position weights, sum to 1
  bool explicit_weights = false;

  // hotspot
  double hot_fraction = 0.5;
  std::uint32_t hot_bank = 0;

  double store_fraction = 0.0;           // synthetic streams only
  std::uint64_t issue_interval = 1;      // open-loop synthetic issue spacing

  std::string trace_path;
};

// Everything a run needs: topology, caches, workload, policy and seed.
// One validated config plus its seed reproduces a run exactly.
struct ExperimentConfig {
  std::uint32_t schema_version = 1;

  // mesh
  std::uint32_t mesh_k = 8;
  std::uint32_t n_vcs = 3;
  std::uint32_t vc_buffer_depth = 4;
  std::uint32_t router_stages = 2;
  std::uint32_t link_cycles = 1;

  // channel / block shape
  std::uint32_t channel_bits = 128;
  std::uint32_t word_bits = 64;
  std::uint32_t words_per_block = 8;

  // caches
  std::uint64_t l1_size_bytes = 32 * 1024;
  std::uint32_t l1_assoc = 8;
  std::uint32_t l1_hit_latency = 2;
  std::uint64_t l2_size_bytes = 512 * 1024;  // per bank
  std::uint32_t l2_assoc = 16;
  std::uint32_t l2_hit_latency = 8;
  std::uint32_t memory_latency = 160;
  std::uint32_t mshr_count = 8;
  bool mem_route_corners = false;  // route L2-miss traffic to corner nodes

  // policy knobs
  Policy policy = Policy::Baseline;
  bool disable_critical_class = false;     // makes er-noc arbitrate like rr
  std::uint32_t starvation_promote_after = 0;  // 0 = off

  // core model
  CoreMode mode = CoreMode::ClosedLoop;
  std::uint32_t think_time = 0;
  std::uint32_t outstanding_window = 1;

  // engine
  std::uint64_t seed = 1;
  std::uint64_t watchdog_idle_cycles = 100000;

  WorkloadSpec workload;

  // derived
  std::uint32_t cores() const { return mesh_k * mesh_k; }
  std::uint32_t words_per_flit() const { return channel_bits / word_bits; }
  std::uint32_t flit_payload_bytes() const { return channel_bits / 8; }
  std::uint32_t word_bytes() const { return word_bits / 8; }
  std::uint32_t block_bytes() const { return words_per_block * word_bytes(); }
  std::uint32_t data_flits() const { return words_per_block / words_per_flit(); }
  std::uint32_t reply_flits() const { return 1 + data_flits(); }

  // Throws ConfigError naming the violated constraint.
  void validate() const;

  // Deterministic key=value dump; parse_config_text round-trips it.
  std::string to_kv_text() const;

  // Identifies the workload for paired-policy comparisons: everything
  // except the policy knobs that A/B runs are allowed to vary.
  std::uint64_t workload_fingerprint() const;
};

ExperimentConfig preset_config(const std::string& name);
std::array<const char*, 3> preset_names();

// Applies `key = value` lines from text on top of base. Unknown keys and
// malformed values raise ConfigError with the offending line number.
ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base);

// Loads, overlays onto base (a preset), and validates.
ExperimentConfig load_config(const std::string& path,
                             const ExperimentConfig& base);

Policy parse_policy(const std::string& name);

}  // namespace nocsim
