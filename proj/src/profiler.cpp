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

#include "nocsim/profiler.hpp"

#include <cstdio>
#include <sstream>

namespace nocsim {

CriticalityHistogram::CriticalityHistogram(std::uint32_t words_per_block,
                                           std::uint32_t words_per_flit)
    : words_per_flit_(words_per_flit),
      word_counts_(words_per_block, 0),
      flit_counts_((words_per_block + words_per_flit - 1) / words_per_flit, 0) {
  NOCSIM_CHECK(words_per_flit >= 1, "words_per_flit must be >= 1");
}

void CriticalityHistogram::record_miss(std::uint32_t block_offset_bytes,
                                       std::uint32_t word_bytes) {
  const std::uint32_t word = block_offset_bytes / word_bytes;
  NOCSIM_CHECK(word < word_counts_.size(), "offset outside block");
  word_counts_[word] += 1;
  flit_counts_[word / words_per_flit_] += 1;
  total_ += 1;
}

void CriticalityHistogram::merge(const CriticalityHistogram& other) {
  NOCSIM_CHECK(other.word_counts_.size() == word_counts_.size() &&
                   other.words_per_flit_ == words_per_flit_,
               "histogram geometry mismatch");
  for (std::size_t i = 0; i < word_counts_.size(); ++i) {
    word_counts_[i] += other.word_counts_[i];
  }
  for (std::size_t i = 0; i < flit_counts_.size(); ++i) {
    flit_counts_[i] += other.flit_counts_[i];
  }
  total_ += other.total_;
}

namespace {

std::vector<double> percentages(const std::vector<std::uint64_t>& counts,
                                std::uint64_t total) {
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string flit_label(std::size_t i, std::size_t n) {
  if (i + 1 == n) return "T";
  return "B" + std::to_string(i);
}

}  // namespace

std::vector<double> CriticalityHistogram::word_percentages() const {
  return percentages(word_counts_, total_);
}

std::vector<double> CriticalityHistogram::flit_percentages() const {
  return percentages(flit_counts_, total_);
}

std::string CriticalityHistogram::report_csv(
    const std::string& workload_name) const {
  std::ostringstream os;
  os << "workload";
  for (std::size_t i = 0; i < word_counts_.size(); ++i) os << ",w" << i;
  for (std::size_t i = 0; i < flit_counts_.size(); ++i) {
    os << "," << flit_label(i, flit_counts_.size());
  }
  os << ",total\n";
  os << workload_name;
  for (double p : word_percentages()) os << "," << fmt2(p);
  for (double p : flit_percentages()) os << "," << fmt2(p);
  os << "," << total_ << "\n";
  return os.str();
}

std::string CriticalityHistogram::report_table(
    const std::string& workload_name) const {
  std::ostringstream os;
  os << "critical word position profile: " << workload_name << "\n";
  if (total_ == 0) {
    os << "  no misses\n";
    return os.str();
  }
  os << "  total misses: " << total_ << "\n  words:";
  const auto wp = word_percentages();
  for (std::size_t i = 0; i < wp.size(); ++i) {
    os << "  w" << i << "=" << fmt2(wp[i]) << "%";
  }
  os << "\n  flits:";
  const auto fp = flit_percentages();
  for (std::size_t i = 0; i < fp.size(); ++i) {
    os << "  " << flit_label(i, fp.size()) << "=" << fmt2(fp[i]) << "%";
  }
  os << "\n";
  return os.str();
}

}  // namespace nocsim
