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

#include "nocsim/workload.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "nocsim/address.hpp"

namespace nocsim {

namespace {

// Flit-level criticality rows (B0 B1 B2 T percentages) measured for the
// multi-threaded suites; word weights split each flit share evenly over
// its two words.
struct ProfileRow {
  const char* name;
  double flits[4];
};

constexpr ProfileRow kProfileRows[] = {
    {"blackscholes", {70.37, 11.94, 7.95, 9.74}},
    {"bodytrack", {45.90, 17.91, 17.38, 18.81}},
    {"canneal", {54.49, 17.20, 13.38, 14.93}},
    {"facesim", {82.06, 7.06, 5.40, 5.48}},
    {"ferret", {67.60, 15.04, 8.56, 8.80}},
    {"fluidanimate", {67.47, 14.34, 8.23, 9.96}},
    {"freqmine", {57.50, 13.67, 12.32, 16.51}},
    {"rtview", {45.59, 20.08, 16.26, 18.07}},
    {"swaptions", {56.33, 14.21, 14.04, 15.42}},
    {"barnes", {43.70, 14.69, 19.40, 22.21}},
    {"cholesky", {67.19, 12.27, 10.26, 10.28}},
    {"fft", {39.10, 14.69, 7.14, 39.07}},
    {"fmm", {50.46, 15.19, 13.94, 20.41}},
    {"lu_cb", {70.99, 6.37, 4.32, 18.32}},
    {"lu_ncb", {58.41, 34.25, 3.70, 3.64}},
    {"ocean_cp", {58.96, 14.35, 13.27, 13.42}},
    {"radix", {37.68, 22.81, 15.47, 24.04}},
    {"raytrace", {45.03, 22.51, 24.03, 8.43}},
};

class StridedStream final : public RequestStream {
 public:
  StridedStream(const ExperimentConfig& cfg, std::uint32_t core)
      : core_(core),
        base_(cfg.workload.base),
        stride_(cfg.workload.stride),
        count_(cfg.workload.count_per_core),
        interval_(cfg.workload.issue_interval) {}

  std::optional<MemRequest> next() override {
    if (i_ >= count_) return std::nullopt;
    MemRequest r;
    r.core_id = core_;
    r.op = MemOp::Load;
    r.address = base_ + i_ * stride_;
    r.issue_cycle = i_ * interval_;
    r.index = i_;
    ++i_;
    return r;
  }

 private:
  std::uint32_t core_;
  Addr base_;
  std::uint64_t stride_;
  std::uint64_t count_;
  std::uint64_t interval_;
  std::uint64_t i_ = 0;
};

// Uniform, profile-weighted and hotspot streams share the same skeleton:
// pick a block, pick a word offset, occasionally emit a store.
class RandomStream final : public RequestStream {
 public:
  RandomStream(const ExperimentConfig& cfg, std::uint32_t core)
      : cfg_(cfg),
        core_(core),
        rng_(cfg.seed, "workload/core" + std::to_string(core)),
        count_(cfg.workload.count_per_core),
        interval_(cfg.workload.issue_interval) {
    const auto& wl = cfg.workload;
    block_bytes_ = cfg.block_bytes();
    word_bytes_ = cfg.word_bytes();
    words_per_block_ = cfg.words_per_block;
    region_blocks_ = wl.region_bytes / block_bytes_;
    region_words_ = wl.region_bytes / word_bytes_;
    if (cfg.workload.kind == WorkloadKind::Profile) {
      std::array<double, 8> w{};
      if (wl.explicit_weights) {
        w = wl.weights;
      } else {
        profile_preset_weights(wl.profile_name, w);
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        cum_weights_[i] = acc;
      }
      cum_weights_.back() = 1.0;
      weighted_offsets_ = true;
    }
    if (cfg.workload.kind == WorkloadKind::Hotspot) {
      const std::uint32_t banks = cfg.cores();
      hot_ = true;
      hot_bank_ = wl.hot_bank;
      hot_fraction_ = wl.hot_fraction;
      // Blocks of the region that are homed at the hot bank.
      first_hot_block_ = wl.region_base / block_bytes_;
      const std::uint64_t rem = first_hot_block_ % banks;
      first_hot_block_ += (hot_bank_ + banks - rem) % banks;
      hot_block_count_ = 0;
      if (first_hot_block_ * block_bytes_ <
          wl.region_base + wl.region_bytes) {
        const std::uint64_t last_block =
            (wl.region_base + wl.region_bytes) / block_bytes_;
        hot_block_count_ = (last_block - first_hot_block_ + banks - 1) / banks;
      }
      NOCSIM_CHECK(hot_block_count_ > 0,
                   "hotspot region holds no block of the hot bank");
      num_banks_ = banks;
    }
  }

  std::optional<MemRequest> next() override {
    if (i_ >= count_) return std::nullopt;
    MemRequest r;
    r.core_id = core_;
    r.index = i_;
    r.issue_cycle = i_ * interval_;

    if (hot_ && rng_.next_double() < hot_fraction_) {
      // A block homed at the hot bank, any word of it.
      const std::uint64_t block =
          first_hot_block_ + rng_.next_below(hot_block_count_) * num_banks_;
      r.address = block * block_bytes_ +
                  rng_.next_below(words_per_block_) * word_bytes_;
    } else if (weighted_offsets_) {
      const std::uint64_t block = cfg_.workload.region_base / block_bytes_ +
                                  rng_.next_below(region_blocks_);
      const double u = rng_.next_double();
      std::uint64_t word = 0;
      while (word + 1 < cum_weights_.size() && u >= cum_weights_[word]) ++word;
      r.address = block * block_bytes_ + word * word_bytes_;
    } else {
      // Word-aligned uniform over the region; sub-block regions are fine.
      r.address = cfg_.workload.region_base +
                  rng_.next_below(region_words_) * word_bytes_;
    }
    r.op = MemOp::Load;
    if (cfg_.workload.store_fraction > 0.0 &&
        rng_.next_double() < cfg_.workload.store_fraction) {
      r.op = MemOp::Store;
    }
    ++i_;
    return r;
  }

 private:
  const ExperimentConfig& cfg_;
  std::uint32_t core_;
  RngStream rng_;
  std::uint64_t count_;
  std::uint64_t interval_;
  std::uint64_t i_ = 0;

  std::uint32_t block_bytes_ = 64;
  std::uint32_t word_bytes_ = 8;
  std::uint32_t words_per_block_ = 8;
  std::uint64_t region_blocks_ = 1;
  std::uint64_t region_words_ = 1;

  bool weighted_offsets_ = false;
  std::array<double, 8> cum_weights_{};

  bool hot_ = false;
  std::uint32_t hot_bank_ = 0;
  std::uint32_t num_banks_ = 1;
  double hot_fraction_ = 0.0;
  std::uint64_t first_hot_block_ = 0;
  std::uint64_t hot_block_count_ = 0;
};

class TraceStream final : public RequestStream {
 public:
  explicit TraceStream(std::vector<MemRequest> reqs) : reqs_(std::move(reqs)) {}

  std::optional<MemRequest> next() override {
    if (i_ >= reqs_.size()) return std::nullopt;
    return reqs_[i_++];
  }

 private:
  std::vector<MemRequest> reqs_;
  std::size_t i_ = 0;
};

}  // namespace

bool profile_preset_weights(const std::string& name, std::array<double, 8>& out) {
  for (const auto& row : kProfileRows) {
    if (name == row.name) {
      for (int f = 0; f < 4; ++f) {
        out[2 * f] = row.flits[f] / 200.0;
        out[2 * f + 1] = row.flits[f] / 200.0;
      }
      return true;
    }
  }
  return false;
}

std::vector<std::string> profile_preset_names() {
  std::vector<std::string> names;
  for (const auto& row : kProfileRows) names.emplace_back(row.name);
  return names;
}

MemRequest parse_trace_line(const std::string& line, int lineno,
                            std::uint32_t core_count) {
  auto fail = [&](const std::string& what) {
    throw ConfigError("trace line " + std::to_string(lineno) + ": " + what);
  };

  std::istringstream in(line);
  std::string cycle_tok, core_tok, op_tok, addr_tok, extra;
  if (!(in >> cycle_tok >> core_tok >> op_tok >> addr_tok)) {
    fail("expected '<cycle> <core_id> <R|W> <hex address>'");
  }
  if (in >> extra) fail("trailing token '" + extra + "'");

  MemRequest r;
  try {
    std::size_t pos = 0;
    r.issue_cycle = std::stoull(cycle_tok, &pos, 10);
    if (pos != cycle_tok.size()) throw std::invalid_argument(cycle_tok);
    std::uint64_t core = std::stoull(core_tok, &pos, 10);
    if (pos != core_tok.size()) throw std::invalid_argument(core_tok);
    r.core_id = static_cast<std::uint32_t>(core);
    r.address = std::stoull(addr_tok, &pos, 16);
    if (pos != addr_tok.size()) throw std::invalid_argument(addr_tok);
  } catch (const std::exception&) {
    fail("malformed numeric field");
  }
  if (op_tok == "R") {
    r.op = MemOp::Load;
  } else if (op_tok == "W") {
    r.op = MemOp::Store;
  } else {
    fail("unknown op '" + op_tok + "' (expected R or W)");
  }
  if (r.core_id >= core_count) {
    fail("core_id " + std::to_string(r.core_id) + " >= core count " +
         std::to_string(core_count));
  }
  return r;
}

std::vector<std::vector<MemRequest>> load_trace(const std::string& path,
                                                std::uint32_t core_count) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::vector<std::vector<MemRequest>> per_core(core_count);
  std::vector<std::uint64_t> next_index(core_count, 0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = line.substr(line.find_first_not_of(" \t\r") ==
                                              std::string::npos
                                          ? line.size()
                                          : line.find_first_not_of(" \t\r"));
    if (t.empty() || t[0] == '#') continue;
    MemRequest r = parse_trace_line(t, lineno, core_count);
    r.index = next_index[r.core_id]++;
    per_core[r.core_id].push_back(r);
  }
  return per_core;
}

std::unique_ptr<RequestStream> make_request_stream(
    const ExperimentConfig& cfg, std::uint32_t core_id,
    std::vector<MemRequest> trace_requests) {
  switch (cfg.workload.kind) {
    case WorkloadKind::Strided:
      return std::make_unique<StridedStream>(cfg, core_id);
    case WorkloadKind::Uniform:
    case WorkloadKind::Profile:
    case WorkloadKind::Hotspot:
      return std::make_unique<RandomStream>(cfg, core_id);
    case WorkloadKind::Trace:
      return std::make_unique<TraceStream>(std::move(trace_requests));
  }
  throw ConfigError("unhandled workload kind");
}

}  // namespace nocsim
