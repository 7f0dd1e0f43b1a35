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
#include <string>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

// Where the critical word of each missed block sits: per word position and
// per data flit. Only L1 load misses are recorded; hits never reach the
// network and are excluded.
class CriticalityHistogram {
 public:
  CriticalityHistogram() : CriticalityHistogram(8, 2) {}
  CriticalityHistogram(std::uint32_t words_per_block,
                       std::uint32_t words_per_flit);

  void record_miss(std::uint32_t block_offset_bytes, std::uint32_t word_bytes);
  void merge(const CriticalityHistogram& other);

  const std::vector<std::uint64_t>& word_counts() const { return word_counts_; }
  const std::vector<std::uint64_t>& flit_counts() const { return flit_counts_; }
  std::uint64_t total_misses() const { return total_; }

  std::vector<double> word_percentages() const;
  std::vector<double> flit_percentages() const;

  // `workload,w0..w7,B0,B1,B2,T,total` (bucket counts vary with geometry).
  std::string report_csv(const std::string& workload_name) const;
  std::string report_table(const std::string& workload_name) const;

 private:
  std::uint32_t words_per_flit_;
  std::vector<std::uint64_t> word_counts_;
  std::vector<std::uint64_t> flit_counts_;
  std::uint64_t total_ = 0;
};

}  // namespace nocsim
