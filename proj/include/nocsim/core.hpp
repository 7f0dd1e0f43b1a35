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
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/workload.hpp"

namespace nocsim {

class L1Controller;

// Simplified core. Closed loop: loads block until their resume event
// (full block for baseline, critical word for the restart policies) with
// up to `outstanding_window` loads in flight and `think_time` idle cycles
// after each resume; stores are fire-and-forget. Open loop: requests are
// replayed at their recorded issue cycles, one per cycle.
class CoreModel {
 public:
  CoreModel(const ExperimentConfig& cfg, std::uint32_t core_id,
            std::unique_ptr<RequestStream> stream);

  void tick(Cycle now, L1Controller& l1);
  void on_resume(std::uint64_t req_index, Cycle resume_at);

  bool done() const;
  std::uint64_t stall_cycles() const { return stall_cycles_; }
  std::uint64_t requests_issued() const { return issued_; }
  std::uint64_t loads_issued() const { return loads_; }
  std::uint64_t stores_issued() const { return stores_; }

 private:
  struct OutstandingLoad {
    std::uint64_t req_index = 0;
    Cycle issue = 0;
    Cycle resume_at = 0;
    bool resumed = false;
  };

  void apply_resumes(Cycle now);
  void stage_next();

  const ExperimentConfig& cfg_;
  std::uint32_t core_id_;
  std::unique_ptr<RequestStream> stream_;
  std::optional<MemRequest> staged_;
  bool exhausted_ = false;

  std::vector<OutstandingLoad> outstanding_;
  Cycle next_allowed_issue_ = 0;
  std::uint64_t stall_cycles_ = 0;
  std::uint64_t issued_ = 0;
  std::uint64_t loads_ = 0;
  std::uint64_t stores_ = 0;
};

}  // namespace nocsim
