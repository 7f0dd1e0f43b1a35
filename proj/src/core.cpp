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

#include "nocsim/core.hpp"

#include <algorithm>

#include "nocsim/memory.hpp"

namespace nocsim {

CoreModel::CoreModel(const ExperimentConfig& cfg, std::uint32_t core_id,
                     std::unique_ptr<RequestStream> stream)
    : cfg_(cfg), core_id_(core_id), stream_(std::move(stream)) {
  stage_next();
}

void CoreModel::stage_next() {
  staged_ = stream_->next();
  if (!staged_) exhausted_ = true;
}

void CoreModel::apply_resumes(Cycle now) {
  for (std::size_t i = 0; i < outstanding_.size();) {
    OutstandingLoad& o = outstanding_[i];
    // A resume at cycle r is visible to the core from r+1 on.
    if (o.resumed && o.resume_at < now) {
      stall_cycles_ += o.resume_at - o.issue;
      next_allowed_issue_ = std::max(
          next_allowed_issue_, o.resume_at + 1 + cfg_.think_time);
      outstanding_.erase(outstanding_.begin() +
                         static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
}

void CoreModel::tick(Cycle now, L1Controller& l1) {
  apply_resumes(now);
  if (!staged_) return;

  if (cfg_.mode == CoreMode::ClosedLoop) {
    if (now < next_allowed_issue_) return;
    if (staged_->op == MemOp::Load &&
        outstanding_.size() >= cfg_.outstanding_window) {
      return;
    }
  } else if (staged_->issue_cycle > now) {
    // Open loop: honor the recorded issue cycle, one request per cycle.
    return;
  }

  MemRequest r = *staged_;
  stage_next();
  r.issue_cycle = now;
  if (r.op == MemOp::Load) {
    outstanding_.push_back(OutstandingLoad{r.index, now, 0, false});
    loads_ += 1;
  } else {
    stores_ += 1;
  }
  issued_ += 1;
  l1.push_request(r);
}

void CoreModel::on_resume(std::uint64_t req_index, Cycle resume_at) {
  for (auto& o : outstanding_) {
    if (o.req_index == req_index && !o.resumed) {
      o.resumed = true;
      o.resume_at = resume_at;
      return;
    }
  }
  throw InternalError("resume for an unknown outstanding load");
}

bool CoreModel::done() const {
  return exhausted_ && !staged_ && outstanding_.empty();
}

}  // namespace nocsim
