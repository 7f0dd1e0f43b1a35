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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

// One switch-allocation event. kind 'W' marks the grant; 'R' lines list
// every contender of a contested output port (two or more candidates).
struct FlitTraceRecord {
  char kind = 'W';
  Cycle cycle = 0;
  NodeId router = 0;
  int in_port = 0;
  int vc = 0;
  int out_port = 0;
  PacketId packet = 0;
  std::uint32_t seq = 0;
  int counter = 0;        // header cfi for heads, counter value for data flits
  bool critical = false;  // reply flit whose critical flit has not passed yet
};

// Line-delimited text trace:
//   <kind> <cycle> <router> <in_port> <vc> <out_port> <packet> <seq> <cnt> <C|N>
class FlitTraceWriter {
 public:
  explicit FlitTraceWriter(const std::string& path);
  ~FlitTraceWriter();

  FlitTraceWriter(const FlitTraceWriter&) = delete;
  FlitTraceWriter& operator=(const FlitTraceWriter&) = delete;

  void append(const FlitTraceRecord& rec);
  void flush();

 private:
  std::unique_ptr<std::ofstream> out_;
  std::string path_;
};

FlitTraceRecord parse_trace_record(const std::string& line, int lineno);

struct TraceAuditResult {
  bool ok = true;
  std::uint64_t grants = 0;
  std::uint64_t contested_ports = 0;
  std::uint64_t priority_checks = 0;
  std::uint64_t counter_sequences = 0;
  std::vector<std::string> violations;  // empty when ok
};

// Audits a trace file for the two cfi-priority guarantees:
//  1. no non-critical candidate ever wins an output port that a critical
//     candidate requested in the same cycle, and within the critical class
//     the winner carries the minimum counter value;
//  2. per (router, reply packet), the counter values logged at data-flit
//     grants run cfi, cfi-1, ..., 0 and stay 0 afterwards.
TraceAuditResult audit_trace_file(const std::string& path);

}  // namespace nocsim
