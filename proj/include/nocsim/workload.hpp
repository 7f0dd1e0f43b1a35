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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/rng.hpp"
#include "nocsim/types.hpp"

namespace nocsim {

// One memory access. The requested address itself is the critical word;
// its offset within the block decides the critical flit.
struct MemRequest {
  std::uint32_t core_id = 0;
  MemOp op = MemOp::Load;
  Addr address = 0;
  Cycle issue_cycle = 0;     // honored in open-loop mode only
  std::uint64_t index = 0;   // program order within the core
};

// Parses one trace line: `<cycle> <core_id> <R|W> <hex address>`.
// lineno is used for error messages only.
MemRequest parse_trace_line(const std::string& line, int lineno,
                            std::uint32_t core_count);

// Full trace load; '#'-prefixed lines and blank lines are skipped.
// Requests are returned per core in file order.
std::vector<std::vector<MemRequest>> load_trace(const std::string& path,
                                                std::uint32_t core_count);

// Lazy per-core request source. Deterministic given (config, seed, core).
class RequestStream {
 public:
  virtual ~RequestStream() = default;
  virtual std::optional<MemRequest> next() = 0;
};

// Builds the stream for one core from the workload spec. Trace workloads
// must pass the preloaded per-core requests (load_trace output).
std::unique_ptr<RequestStream> make_request_stream(
    const ExperimentConfig& cfg, std::uint32_t core_id,
    std::vector<MemRequest> trace_requests = {});

// Word-position weights of a named criticality preset (weights of word 0..7,
// fractions summing to 1). Returns false for unknown names.
bool profile_preset_weights(const std::string& name, std::array<double, 8>& out);

std::vector<std::string> profile_preset_names();

}  // namespace nocsim
