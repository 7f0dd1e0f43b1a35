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

#include "nocsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nocsim/address.hpp"
#include "nocsim/workload.hpp"

namespace nocsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& v) {
  std::size_t pos = 0;
  std::uint64_t out = std::stoull(v, &pos, 0);
  if (pos != v.size()) throw std::invalid_argument(v);
  return out;
}

double parse_f64(const std::string& v) {
  std::size_t pos = 0;
  double out = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument(v);
}

std::string fmt_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* workload_kind_name(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::Strided: return "strided";
    case WorkloadKind::Uniform: return "uniform";
    case WorkloadKind::Profile: return "profile";
    case WorkloadKind::Hotspot: return "hotspot";
    case WorkloadKind::Trace: return "trace";
  }
  return "?";
}

WorkloadKind parse_workload_kind(const std::string& v) {
  if (v == "strided") return WorkloadKind::Strided;
  if (v == "uniform") return WorkloadKind::Uniform;
  if (v == "profile") return WorkloadKind::Profile;
  if (v == "hotspot") return WorkloadKind::Hotspot;
  if (v == "trace") return WorkloadKind::Trace;
  throw std::invalid_argument(v);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Policy parse_policy(const std::string& name) {
  if (name == "baseline") return Policy::Baseline;
  if (name == "er") return Policy::EarlyRestart;
  if (name == "er-noc") return Policy::EarlyRestartNoc;
  throw ConfigError("unknown policy '" + name +
                    "' (expected baseline, er or er-noc)");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };

  if (schema_version != 1) fail("schema_version must be 1");
  if (mesh_k < 2) fail("mesh_k must be >= 2");
  if (n_vcs < 1) fail("n_vcs must be >= 1");
  if (vc_buffer_depth < 1) fail("vc_buffer_depth must be >= 1");
  if (router_stages < 2) fail("router_stages must be >= 2");
  if (link_cycles < 1) fail("link_cycles must be >= 1");
  if (word_bits < 8 || word_bits % 8 != 0) fail("word_bits must be a multiple of 8");
  if (channel_bits == 0 || channel_bits % word_bits != 0) {
    fail("channel_bits / word_bits must be a whole number of words per flit");
  }
  if (words_per_block == 0 || words_per_block % words_per_flit() != 0) {
    fail("words_per_block must be a whole number of flit payloads");
  }
  if (policy == Policy::EarlyRestartNoc && data_flits() != 4) {
    fail("er-noc needs exactly 4 data flits per reply (2-bit critical flit "
         "identifier); got " + std::to_string(data_flits()));
  }
  if (mshr_count < 1) fail("mshr_count must be >= 1");
  if (outstanding_window < 1) fail("outstanding_window must be >= 1");
  if (watchdog_idle_cycles < 1) fail("watchdog_idle_cycles must be >= 1");

  // Constructing the geometries performs the power-of-two and divisibility
  // checks for both cache levels.
  const auto l1 = CacheGeometry::make(l1_size_bytes, l1_assoc, block_bytes(),
                                      word_bytes());
  (void)CacheGeometry::make(l2_size_bytes, l2_assoc, block_bytes(), word_bytes());
  if (l1.num_sets == 0) fail("l1 geometry degenerates to zero sets");

  const auto& wl = workload;
  if (wl.kind != WorkloadKind::Trace) {
    if (wl.issue_interval < 1) fail("wl_issue_interval must be >= 1");
    if (wl.store_fraction < 0.0 || wl.store_fraction > 1.0) {
      fail("wl_store_fraction must be in [0, 1]");
    }
  }
  switch (wl.kind) {
    case WorkloadKind::Strided:
      break;
    case WorkloadKind::Uniform:
    case WorkloadKind::Hotspot:
    case WorkloadKind::Profile: {
      if (wl.region_bytes < word_bytes()) fail("wl_region_bytes smaller than one word");
      if (wl.region_base % word_bytes() != 0 || wl.region_bytes % word_bytes() != 0) {
        fail("workload region must be word aligned");
      }
      if (wl.kind != WorkloadKind::Uniform) {
        if (wl.region_base % block_bytes() != 0 ||
            wl.region_bytes % block_bytes() != 0 ||
            wl.region_bytes < block_bytes()) {
          fail("profile/hotspot regions must be block aligned");
        }
      }
      if (wl.kind == WorkloadKind::Hotspot) {
        if (!(wl.hot_fraction > 0.0 && wl.hot_fraction <= 1.0)) {
          fail("wl_hot_fraction must be in (0, 1]");
        }
        if (wl.hot_bank >= cores()) fail("wl_hot_bank outside the mesh");
        if (wl.region_bytes / block_bytes() < cores()) {
          fail("hotspot region too small to cover every bank");
        }
      }
      if (wl.kind == WorkloadKind::Profile) {
        if (words_per_block != 8) {
          fail("profile workloads assume 8 words per block");
        }
        std::array<double, 8> w{};
        if (wl.explicit_weights) {
          w = wl.weights;
        } else if (!profile_preset_weights(wl.profile_name, w)) {
          fail("unknown wl_profile preset '" + wl.profile_name + "'");
        }
        double sum = 0.0;
        for (double x : w) {
          if (x < 0.0) fail("wl_weights must be non-negative");
          sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
          fail("wl_weights must sum to 1 (got " + fmt_f64(sum) + ")");
        }
      }
      break;
    }
    case WorkloadKind::Trace: {
      if (wl.trace_path.empty()) fail("workload=trace requires wl_trace_path");
      if (!std::filesystem::exists(wl.trace_path)) {
        fail("trace file not found: " + wl.trace_path);
      }
      break;
    }
  }
}

std::string ExperimentConfig::to_kv_text() const {
  std::ostringstream os;
  os << "schema_version = " << schema_version << "\n";
  os << "mesh_k = " << mesh_k << "\n";
  os << "n_vcs = " << n_vcs << "\n";
  os << "vc_buffer_depth = " << vc_buffer_depth << "\n";
  os << "router_stages = " << router_stages << "\n";
  os << "link_cycles = " << link_cycles << "\n";
  os << "channel_bits = " << channel_bits << "\n";
  os << "word_bits = " << word_bits << "\n";
  os << "words_per_block = " << words_per_block << "\n";
  os << "l1_size_bytes = " << l1_size_bytes << "\n";
  os << "l1_assoc = " << l1_assoc << "\n";
  os << "l1_hit_latency = " << l1_hit_latency << "\n";
  os << "l2_size_bytes = " << l2_size_bytes << "\n";
  os << "l2_assoc = " << l2_assoc << "\n";
  os << "l2_hit_latency = " << l2_hit_latency << "\n";
  os << "memory_latency = " << memory_latency << "\n";
  os << "mshr_count = " << mshr_count << "\n";
  os << "mem_route_corners = " << (mem_route_corners ? "true" : "false") << "\n";
  os << "policy = " << policy_name(policy) << "\n";
  os << "disable_critical_class = " << (disable_critical_class ? "true" : "false") << "\n";
  os << "starvation_promote_after = " << starvation_promote_after << "\n";
  os << "mode = " << (mode == CoreMode::OpenLoop ? "open" : "closed") << "\n";
  os << "think_time = " << think_time << "\n";
  os << "outstanding_window = " << outstanding_window << "\n";
  os << "seed = " << seed << "\n";
  os << "watchdog_idle_cycles = " << watchdog_idle_cycles << "\n";
  os << "workload = " << workload_kind_name(workload.kind) << "\n";
  os << "wl_count = " << workload.count_per_core << "\n";
  switch (workload.kind) {
    case WorkloadKind::Strided:
      os << "wl_base = " << workload.base << "\n";
      os << "wl_stride = " << workload.stride << "\n";
      break;
    case WorkloadKind::Uniform:
    case WorkloadKind::Profile:
    case WorkloadKind::Hotspot:
      os << "wl_region_base = " << workload.region_base << "\n";
      os << "wl_region_bytes = " << workload.region_bytes << "\n";
      if (workload.kind == WorkloadKind::Profile) {
        if (workload.explicit_weights) {
          os << "wl_weights = ";
          for (std::size_t i = 0; i < workload.weights.size(); ++i) {
            os << (i ? "," : "") << fmt_f64(workload.weights[i]);
          }
          os << "\n";
        } else {
          os << "wl_profile = " << workload.profile_name << "\n";
        }
      }
      if (workload.kind == WorkloadKind::Hotspot) {
        os << "wl_hot_fraction = " << fmt_f64(workload.hot_fraction) << "\n";
        os << "wl_hot_bank = " << workload.hot_bank << "\n";
      }
      break;
    case WorkloadKind::Trace:
      os << "wl_trace_path = " << workload.trace_path << "\n";
      break;
  }
  if (workload.kind != WorkloadKind::Trace) {
    os << "wl_store_fraction = " << fmt_f64(workload.store_fraction) << "\n";
    os << "wl_issue_interval = " << workload.issue_interval << "\n";
  }
  return os.str();
}

std::uint64_t ExperimentConfig::workload_fingerprint() const {
  std::istringstream in(to_kv_text());
  std::ostringstream filtered;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("policy = ", 0) == 0) continue;
    filtered << line << "\n";
  }
  return fnv1a(filtered.str());
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;  // defaults mirror the reference system table
  cfg.workload.kind = WorkloadKind::Uniform;
  cfg.workload.count_per_core = 1000;
  cfg.workload.region_base = 0;
  cfg.workload.region_bytes = 1ull << 24;
  if (name == "table1") {
    return cfg;
  }
  if (name == "desk") {
    cfg.mesh_k = 4;
    return cfg;
  }
  if (name == "hotspot") {
    cfg.mesh_k = 4;
    cfg.mode = CoreMode::ClosedLoop;
    cfg.outstanding_window = 4;
    cfg.workload.kind = WorkloadKind::Hotspot;
    cfg.workload.count_per_core = 7000;
    cfg.workload.region_base = 0;
    cfg.workload.region_bytes = 1ull << 20;
    cfg.workload.hot_fraction = 0.8;
    cfg.workload.hot_bank = 5;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::array<const char*, 3> preset_names() {
  return {"table1", "desk", "hotspot"};
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const ExperimentConfig& base) {
  ExperimentConfig cfg = base;

  using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"schema_version", [](ExperimentConfig& c, const std::string& v) {
         c.schema_version = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"mesh_k", [](ExperimentConfig& c, const std::string& v) {
         c.mesh_k = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"n_vcs", [](ExperimentConfig& c, const std::string& v) {
         c.n_vcs = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"vc_buffer_depth", [](ExperimentConfig& c, const std::string& v) {
         c.vc_buffer_depth = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"router_stages", [](ExperimentConfig& c, const std::string& v) {
         c.router_stages = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"link_cycles", [](ExperimentConfig& c, const std::string& v) {
         c.link_cycles = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"channel_bits", [](ExperimentConfig& c, const std::string& v) {
         c.channel_bits = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"word_bits", [](ExperimentConfig& c, const std::string& v) {
         c.word_bits = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"words_per_block", [](ExperimentConfig& c, const std::string& v) {
         c.words_per_block = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"l1_size_bytes", [](ExperimentConfig& c, const std::string& v) {
         c.l1_size_bytes = parse_u64(v); }},
      {"l1_assoc", [](ExperimentConfig& c, const std::string& v) {
         c.l1_assoc = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"l1_hit_latency", [](ExperimentConfig& c, const std::string& v) {
         c.l1_hit_latency = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"l2_size_bytes", [](ExperimentConfig& c, const std::string& v) {
         c.l2_size_bytes = parse_u64(v); }},
      {"l2_assoc", [](ExperimentConfig& c, const std::string& v) {
         c.l2_assoc = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"l2_hit_latency", [](ExperimentConfig& c, const std::string& v) {
         c.l2_hit_latency = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"memory_latency", [](ExperimentConfig& c, const std::string& v) {
         c.memory_latency = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"mshr_count", [](ExperimentConfig& c, const std::string& v) {
         c.mshr_count = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"mem_route_corners", [](ExperimentConfig& c, const std::string& v) {
         c.mem_route_corners = parse_bool(v); }},
      {"policy", [](ExperimentConfig& c, const std::string& v) {
         c.policy = parse_policy(v); }},
      {"disable_critical_class", [](ExperimentConfig& c, const std::string& v) {
         c.disable_critical_class = parse_bool(v); }},
      {"starvation_promote_after", [](ExperimentConfig& c, const std::string& v) {
         c.starvation_promote_after = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"mode", [](ExperimentConfig& c, const std::string& v) {
         if (v == "open") c.mode = CoreMode::OpenLoop;
         else if (v == "closed") c.mode = CoreMode::ClosedLoop;
         else throw std::invalid_argument(v); }},
      {"think_time", [](ExperimentConfig& c, const std::string& v) {
         c.think_time = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"outstanding_window", [](ExperimentConfig& c, const std::string& v) {
         c.outstanding_window = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"seed", [](ExperimentConfig& c, const std::string& v) {
         c.seed = parse_u64(v); }},
      {"watchdog_idle_cycles", [](ExperimentConfig& c, const std::string& v) {
         c.watchdog_idle_cycles = parse_u64(v); }},
      {"workload", [](ExperimentConfig& c, const std::string& v) {
         c.workload.kind = parse_workload_kind(v); }},
      {"wl_count", [](ExperimentConfig& c, const std::string& v) {
         c.workload.count_per_core = parse_u64(v); }},
      {"wl_base", [](ExperimentConfig& c, const std::string& v) {
         c.workload.base = parse_u64(v); }},
      {"wl_stride", [](ExperimentConfig& c, const std::string& v) {
         c.workload.stride = parse_u64(v); }},
      {"wl_region_base", [](ExperimentConfig& c, const std::string& v) {
         c.workload.region_base = parse_u64(v); }},
      {"wl_region_bytes", [](ExperimentConfig& c, const std::string& v) {
         c.workload.region_bytes = parse_u64(v); }},
      {"wl_profile", [](ExperimentConfig& c, const std::string& v) {
         c.workload.profile_name = v;
         c.workload.explicit_weights = false; }},
      {"wl_weights", [](ExperimentConfig& c, const std::string& v) {
         std::istringstream ws(v);
         std::string tok;
         std::size_t i = 0;
         while (std::getline(ws, tok, ',')) {
           if (i >= c.workload.weights.size()) throw std::invalid_argument(v);
           c.workload.weights[i++] = parse_f64(trim(tok));
         }
         if (i != c.workload.weights.size()) throw std::invalid_argument(v);
         c.workload.explicit_weights = true; }},
      {"wl_hot_fraction", [](ExperimentConfig& c, const std::string& v) {
         c.workload.hot_fraction = parse_f64(v); }},
      {"wl_hot_bank", [](ExperimentConfig& c, const std::string& v) {
         c.workload.hot_bank = static_cast<std::uint32_t>(parse_u64(v)); }},
      {"wl_store_fraction", [](ExperimentConfig& c, const std::string& v) {
         c.workload.store_fraction = parse_f64(v); }},
      {"wl_issue_interval", [](ExperimentConfig& c, const std::string& v) {
         c.workload.issue_interval = parse_u64(v); }},
      {"wl_trace_path", [](ExperimentConfig& c, const std::string& v) {
         c.workload.trace_path = v; }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad value '" +
                        value + "' for key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config_text(ss.str(), base);
  cfg.validate();
  return cfg;
}

}  // namespace nocsim
