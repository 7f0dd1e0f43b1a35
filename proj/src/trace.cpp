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

#include "nocsim/trace.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "nocsim/packet.hpp"

namespace nocsim {

FlitTraceWriter::FlitTraceWriter(const std::string& path)
    : out_(std::make_unique<std::ofstream>(path)), path_(path) {
  if (!*out_) throw ConfigError("cannot open trace file for writing: " + path);
  *out_ << "# nocsim flit trace v1\n";
}

FlitTraceWriter::~FlitTraceWriter() = default;

void FlitTraceWriter::append(const FlitTraceRecord& r) {
  *out_ << r.kind << ' ' << r.cycle << ' ' << r.router << ' '
        << port_name(r.in_port) << ' ' << r.vc << ' ' << port_name(r.out_port)
        << ' ' << r.packet << ' ' << r.seq << ' ' << r.counter << ' '
        << (r.critical ? 'C' : 'N') << '\n';
}

void FlitTraceWriter::flush() {
  out_->flush();
  if (!*out_) throw ConfigError("trace write failed: " + path_);
}

namespace {

int parse_port(const std::string& tok, int lineno) {
  if (tok.size() == 1) {
    switch (tok[0]) {
      case 'N': return kPortNorth;
      case 'S': return kPortSouth;
      case 'E': return kPortEast;
      case 'W': return kPortWest;
      case 'L': return kPortLocal;
      default: break;
    }
  }
  throw ConfigError("trace line " + std::to_string(lineno) + ": bad port '" +
                    tok + "'");
}

}  // namespace

FlitTraceRecord parse_trace_record(const std::string& line, int lineno) {
  std::istringstream in(line);
  std::string kind, in_port, out_port, cls;
  FlitTraceRecord r;
  if (!(in >> kind >> r.cycle >> r.router >> in_port >> r.vc >> out_port >>
        r.packet >> r.seq >> r.counter >> cls) ||
      kind.size() != 1 || (kind[0] != 'W' && kind[0] != 'R') ||
      (cls != "C" && cls != "N")) {
    throw ConfigError("trace line " + std::to_string(lineno) +
                      ": malformed record");
  }
  r.kind = kind[0];
  r.in_port = parse_port(in_port, lineno);
  r.out_port = parse_port(out_port, lineno);
  r.critical = (cls == "C");
  return r;
}

TraceAuditResult audit_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);

  TraceAuditResult res;
  auto violation = [&](const std::string& what) {
    res.ok = false;
    if (res.violations.size() < 32) res.violations.push_back(what);
  };

  // Records of one cycle are contiguous and grouped per (router, out_port):
  // R lines of a contest directly precede their W line.
  std::vector<FlitTraceRecord> contenders;
  // Per (router, packet): counter-sequence state.
  struct SeqState {
    int cfi = 0;
    int data_flits_seen = 0;
    bool saw_head = false;
  };
  std::map<std::pair<NodeId, PacketId>, SeqState> seqs;

  auto check_contest = [&](const FlitTraceRecord& win) {
    if (contenders.empty()) return;
    ++res.contested_ports;
    bool any_critical = false;
    int min_critical_cnt = 0;
    bool sane = true;
    for (const auto& c : contenders) {
      if (c.cycle != win.cycle || c.router != win.router ||
          c.out_port != win.out_port) {
        sane = false;
      }
      if (c.critical) {
        if (!any_critical || c.counter < min_critical_cnt) {
          min_critical_cnt = c.counter;
        }
        any_critical = true;
      }
    }
    if (!sane) {
      violation("R/W grouping mismatch at cycle " + std::to_string(win.cycle));
      return;
    }
    if (any_critical) {
      ++res.priority_checks;
      if (!win.critical) {
        violation("non-critical flit won over a critical contender at cycle " +
                  std::to_string(win.cycle) + " router " +
                  std::to_string(win.router));
      } else if (win.counter != min_critical_cnt) {
        violation("critical winner did not carry the minimum counter at cycle " +
                  std::to_string(win.cycle) + " router " +
                  std::to_string(win.router));
      }
    }
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const FlitTraceRecord r = parse_trace_record(line, lineno);
    if (r.kind == 'R') {
      // A stale contender set means a W line went missing.
      if (!contenders.empty() &&
          (contenders.front().cycle != r.cycle ||
           contenders.front().router != r.router ||
           contenders.front().out_port != r.out_port)) {
        violation("contender set without a grant before line " +
                  std::to_string(lineno));
        contenders.clear();
      }
      contenders.push_back(r);
      continue;
    }
    ++res.grants;
    check_contest(r);
    contenders.clear();

    // Counter sequence audit (reply packets only; heads declare the cfi).
    auto& st = seqs[{r.router, r.packet}];
    if (r.seq == 0) {
      st.cfi = r.counter;
      st.saw_head = true;
      st.data_flits_seen = 0;
      if (r.critical) {
        // Reply head: nothing more to check here.
      }
    } else if (st.saw_head) {
      ++st.data_flits_seen;
      const int expected =
          std::max(st.cfi - (st.data_flits_seen - 1), 0);
      if (r.counter != expected) {
        violation("counter sequence broken for packet " +
                  std::to_string(r.packet) + " at router " +
                  std::to_string(r.router) + ": got " +
                  std::to_string(r.counter) + ", expected " +
                  std::to_string(expected));
      }
      if (st.data_flits_seen == 1) ++res.counter_sequences;
    }
  }
  if (!contenders.empty()) {
    violation("trace ended with an unresolved contender set");
  }
  return res;
}

}  // namespace nocsim
