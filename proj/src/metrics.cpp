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

#include "nocsim/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nocsim {

namespace {

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Cycle rdt(const MissRecord& rec) {
  NOCSIM_CHECK(rec.head_arrival != kNoArrival, "incomplete miss record");
  if (rec.flit_arrivals.empty()) return 0;  // degenerate 1-flit packet
  const Cycle last = rec.flit_arrivals.back();
  NOCSIM_CHECK(last != kNoArrival && last >= rec.head_arrival,
               "incomplete miss record");
  return last - rec.head_arrival;
}

PenaltyPair miss_penalty(const MissRecord& rec, Policy policy) {
  PenaltyPair p;
  p.fill = rec.fill_complete - rec.miss_cycle;
  Cycle resume = rec.fill_complete;
  if (policy == Policy::EarlyRestart || policy == Policy::EarlyRestartNoc) {
    NOCSIM_CHECK(rec.cfi < rec.flit_arrivals.size(), "cfi outside reply");
    resume = rec.flit_arrivals[rec.cfi];
    if (resume < rec.miss_cycle) resume = rec.miss_cycle;  // coalesced late
  }
  p.stall = resume - rec.miss_cycle;
  return p;
}

void FlitLatencyHistogram::record(Cycle latency) {
  const std::size_t b = static_cast<std::size_t>(latency / kBucketWidth);
  buckets[b < kBuckets ? b : kBuckets] += 1;
  count += 1;
  sum += latency;
  if (latency > max) max = latency;
}

double FlitLatencyHistogram::mean() const {
  return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count);
}

std::string FlitLatencyHistogram::compact() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    if (buckets[i] == 0) continue;
    if (!first) os << ';';
    first = false;
    if (i < kBuckets) {
      os << i * kBucketWidth << ':' << buckets[i];
    } else {
      os << kBuckets * kBucketWidth << "+:" << buckets[i];
    }
  }
  return os.str();
}

MetricsCollector::MetricsCollector(Policy policy, std::uint32_t data_flits)
    : policy_(policy), data_flits_(data_flits) {}

MetricsCollector::~MetricsCollector() = default;

void MetricsCollector::open_dump(const std::string& path) {
  dump_ = std::make_unique<std::ofstream>(path);
  if (!*dump_) throw ConfigError("cannot open miss dump for writing: " + path);
  dump_path_ = path;
  *dump_ << "# core block cfi miss head";
  for (std::uint32_t i = 0; i < data_flits_; ++i) *dump_ << " f" << i;
  *dump_ << " critical fill resume\n";
}

void MetricsCollector::add_record(const MissRecord& rec) {
  NOCSIM_CHECK(rec.flit_arrivals.size() == data_flits_,
               "record has wrong flit count");
  // Wormhole ordering must hold on every completed record.
  Cycle prev = rec.head_arrival;
  for (Cycle a : rec.flit_arrivals) {
    NOCSIM_CHECK(a >= prev, "flit arrivals out of order");
    prev = a;
  }
  NOCSIM_CHECK(rec.critical_arrival <= rec.fill_complete,
               "critical word after fill completion");

  records_ += 1;
  const Cycle d = rdt(rec);
  rdt_sum_ += d;
  if (d < rdt_min_) rdt_min_ = d;
  if (d > rdt_max_) rdt_max_ = d;

  const PenaltyPair p = miss_penalty(rec, policy_);
  stall_sum_ += p.stall;
  fill_sum_ += p.fill;

  if (dump_) {
    *dump_ << rec.core_id << ' ' << rec.block_address << ' '
           << static_cast<int>(rec.cfi) << ' ' << rec.miss_cycle << ' '
           << rec.head_arrival;
    for (Cycle a : rec.flit_arrivals) *dump_ << ' ' << a;
    *dump_ << ' ' << rec.critical_arrival << ' ' << rec.fill_complete << ' '
           << rec.resume_cycle << '\n';
  }
}

void MetricsCollector::finish(RunStats& stats) const {
  stats.l1_load_misses = records_;
  stats.rdt_count = records_;
  if (records_ == 0) {
    stats.rdt_min = 0;
    stats.rdt_max = 0;
    stats.rdt_mean = 0.0;
    stats.stall_penalty_mean = 0.0;
    stats.fill_penalty_mean = 0.0;
    stats.stall_penalty_total = 0;
    stats.fill_penalty_total = 0;
    return;
  }
  stats.rdt_min = rdt_min_;
  stats.rdt_max = rdt_max_;
  stats.rdt_mean = static_cast<double>(rdt_sum_) / static_cast<double>(records_);
  stats.stall_penalty_total = stall_sum_;
  stats.fill_penalty_total = fill_sum_;
  stats.stall_penalty_mean =
      static_cast<double>(stall_sum_) / static_cast<double>(records_);
  stats.fill_penalty_mean =
      static_cast<double>(fill_sum_) / static_cast<double>(records_);
}

double speedup(const RunStats& base, const RunStats& prop) {
  if (base.workload_fingerprint != prop.workload_fingerprint ||
      base.seed != prop.seed) {
    throw ConfigError("speedup between mismatched workloads (fingerprint/seed)");
  }
  NOCSIM_CHECK(prop.total_cycles > 0, "speedup over a zero-cycle run");
  return static_cast<double>(base.total_cycles) /
         static_cast<double>(prop.total_cycles);
}

namespace {

const char* kCsvHeader =
    "schema_version,policy,seed,total_cycles,completed,requests,loads,stores,"
    "l1_hits,l1_load_misses,coalesced_misses,mshr_stall_cycles,"
    "packets_injected,flits_injected,flits_ejected,rdt_count,rdt_min,rdt_max,"
    "rdt_mean,stall_penalty_mean,fill_penalty_mean,stall_penalty_total,"
    "fill_penalty_total,core_stall_total,per_core_stall,flit_latency_mean,"
    "flit_latency_max,flit_latency_hist";

std::uint64_t core_stall_total(const RunStats& s) {
  std::uint64_t t = 0;
  for (auto v : s.per_core_stall) t += v;
  return t;
}

std::string per_core_compact(const RunStats& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.per_core_stall.size(); ++i) {
    if (i) os << ';';
    os << s.per_core_stall[i];
  }
  return os.str();
}

void csv_row(std::ostringstream& os, const RunStats& s) {
  os << s.schema_version << ',' << s.policy_label << ',' << s.seed << ','
     << s.total_cycles << ',' << (s.completed ? 1 : 0) << ',' << s.requests
     << ',' << s.loads << ',' << s.stores << ',' << s.l1_hits << ','
     << s.l1_load_misses << ',' << s.coalesced_misses << ','
     << s.mshr_stall_cycles << ',' << s.packets_injected << ','
     << s.flits_injected << ',' << s.flits_ejected << ',' << s.rdt_count << ','
     << s.rdt_min << ',' << s.rdt_max << ',' << fmt4(s.rdt_mean) << ','
     << fmt4(s.stall_penalty_mean) << ',' << fmt4(s.fill_penalty_mean) << ','
     << s.stall_penalty_total << ',' << s.fill_penalty_total << ','
     << core_stall_total(s) << ',' << per_core_compact(s) << ','
     << fmt4(s.flit_latency.mean()) << ',' << s.flit_latency.max << ','
     << s.flit_latency.compact();
}

void config_comment_block(std::ostringstream& os, const std::string& kv) {
  os << "# config-begin\n";
  std::istringstream in(kv);
  std::string line;
  while (std::getline(in, line)) os << "# " << line << "\n";
  os << "# config-end\n";
}

void json_config_object(std::ostringstream& os, const std::string& kv,
                        const std::string& indent) {
  os << "{";
  std::istringstream in(kv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    if (!first) os << ",";
    first = false;
    os << "\n" << indent << "  \"" << json_escape(line.substr(0, eq))
       << "\": \"" << json_escape(line.substr(eq + 3)) << "\"";
  }
  os << "\n" << indent << "}";
}

void json_stats_object(std::ostringstream& os, const RunStats& s,
                       const std::string& indent) {
  os << "{\n";
  const std::string in2 = indent + "  ";
  os << in2 << "\"schema_version\": " << s.schema_version << ",\n";
  os << in2 << "\"policy\": \"" << json_escape(s.policy_label) << "\",\n";
  os << in2 << "\"seed\": " << s.seed << ",\n";
  os << in2 << "\"total_cycles\": " << s.total_cycles << ",\n";
  os << in2 << "\"completed\": " << (s.completed ? "true" : "false") << ",\n";
  os << in2 << "\"requests\": " << s.requests << ",\n";
  os << in2 << "\"loads\": " << s.loads << ",\n";
  os << in2 << "\"stores\": " << s.stores << ",\n";
  os << in2 << "\"l1_hits\": " << s.l1_hits << ",\n";
  os << in2 << "\"l1_load_misses\": " << s.l1_load_misses << ",\n";
  os << in2 << "\"coalesced_misses\": " << s.coalesced_misses << ",\n";
  os << in2 << "\"mshr_stall_cycles\": " << s.mshr_stall_cycles << ",\n";
  os << in2 << "\"packets_injected\": " << s.packets_injected << ",\n";
  os << in2 << "\"flits_injected\": " << s.flits_injected << ",\n";
  os << in2 << "\"flits_ejected\": " << s.flits_ejected << ",\n";
  os << in2 << "\"rdt_count\": " << s.rdt_count << ",\n";
  os << in2 << "\"rdt_min\": " << s.rdt_min << ",\n";
  os << in2 << "\"rdt_max\": " << s.rdt_max << ",\n";
  os << in2 << "\"rdt_mean\": " << fmt4(s.rdt_mean) << ",\n";
  os << in2 << "\"stall_penalty_mean\": " << fmt4(s.stall_penalty_mean) << ",\n";
  os << in2 << "\"fill_penalty_mean\": " << fmt4(s.fill_penalty_mean) << ",\n";
  os << in2 << "\"stall_penalty_total\": " << s.stall_penalty_total << ",\n";
  os << in2 << "\"fill_penalty_total\": " << s.fill_penalty_total << ",\n";
  os << in2 << "\"core_stall_total\": " << core_stall_total(s) << ",\n";
  os << in2 << "\"per_core_stall\": [";
  for (std::size_t i = 0; i < s.per_core_stall.size(); ++i) {
    os << (i ? ", " : "") << s.per_core_stall[i];
  }
  os << "],\n";
  os << in2 << "\"flit_latency_mean\": " << fmt4(s.flit_latency.mean()) << ",\n";
  os << in2 << "\"flit_latency_max\": " << s.flit_latency.max << ",\n";
  os << in2 << "\"flit_latency_hist\": \"" << s.flit_latency.compact()
     << "\",\n";
  os << in2 << "\"workload_fingerprint\": " << s.workload_fingerprint << "\n";
  os << indent << "}";
}

}  // namespace

std::string emit_stats(const RunStats& stats, ReportFormat fmt,
                       const std::string& config_kv_text) {
  std::ostringstream os;
  if (fmt == ReportFormat::Csv) {
    config_comment_block(os, config_kv_text);
    os << kCsvHeader << "\n";
    csv_row(os, stats);
    os << "\n";
    return os.str();
  }
  os << "{\n  \"schema_version\": " << stats.schema_version << ",\n";
  os << "  \"config\": ";
  json_config_object(os, config_kv_text, "  ");
  os << ",\n  \"run\": ";
  json_stats_object(os, stats, "  ");
  os << "\n}\n";
  return os.str();
}

std::string emit_comparison(const ComparisonReport& rep, ReportFormat fmt) {
  NOCSIM_CHECK(!rep.runs.empty(), "comparison of zero runs");
  const RunStats& base = rep.runs.front();
  auto norm = [](double b, double v) { return b == 0.0 ? 0.0 : v / b; };

  std::ostringstream os;
  if (fmt == ReportFormat::Csv) {
    config_comment_block(os, rep.config_kv_text);
    os << kCsvHeader
       << ",norm_total_cycles,norm_rdt_mean,norm_stall_penalty_mean,"
          "norm_fill_penalty_mean,speedup_vs_first\n";
    for (const auto& s : rep.runs) {
      csv_row(os, s);
      os << ',' << fmt4(norm(static_cast<double>(base.total_cycles),
                             static_cast<double>(s.total_cycles)))
         << ',' << fmt4(norm(base.rdt_mean, s.rdt_mean)) << ','
         << fmt4(norm(base.stall_penalty_mean, s.stall_penalty_mean)) << ','
         << fmt4(norm(base.fill_penalty_mean, s.fill_penalty_mean)) << ','
         << fmt4(speedup(base, s)) << "\n";
    }
    return os.str();
  }
  os << "{\n  \"schema_version\": " << base.schema_version << ",\n";
  os << "  \"config\": ";
  json_config_object(os, rep.config_kv_text, "  ");
  os << ",\n  \"runs\": [\n";
  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    const auto& s = rep.runs[i];
    os << "    {\n      \"stats\": ";
    json_stats_object(os, s, "      ");
    os << ",\n      \"norm_total_cycles\": "
       << fmt4(norm(static_cast<double>(base.total_cycles),
                    static_cast<double>(s.total_cycles)))
       << ",\n      \"norm_rdt_mean\": " << fmt4(norm(base.rdt_mean, s.rdt_mean))
       << ",\n      \"norm_stall_penalty_mean\": "
       << fmt4(norm(base.stall_penalty_mean, s.stall_penalty_mean))
       << ",\n      \"norm_fill_penalty_mean\": "
       << fmt4(norm(base.fill_penalty_mean, s.fill_penalty_mean))
       << ",\n      \"speedup_vs_first\": " << fmt4(speedup(base, s)) << "\n    }"
       << (i + 1 < rep.runs.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace nocsim
