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

#include "nocsim/packet.hpp"

namespace nocsim {

const char* port_name(int port) {
  switch (port) {
    case kPortNorth: return "N";
    case kPortSouth: return "S";
    case kPortEast: return "E";
    case kPortWest: return "W";
    case kPortLocal: return "L";
    default: return "?";
  }
}

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::Baseline: return "baseline";
    case Policy::EarlyRestart: return "er";
    case Policy::EarlyRestartNoc: return "er-noc";
  }
  return "?";
}

Flit flit_view(const Packet& pkt, std::uint32_t seq) {
  NOCSIM_CHECK(seq < pkt.num_flits, "flit seq out of range");
  Flit f;
  f.kind = pkt.kind_of(seq);
  f.packet_id = pkt.id;
  f.seq = seq;
  f.payload = pkt.payload_of(seq);
  if (f.kind == FlitKind::Head || f.kind == FlitKind::HeadTail) {
    f.header = &pkt.header;
  }
  return f;
}

Packet packetize_reply(std::span<const std::uint64_t> block, std::uint8_t cfi,
                       NodeId src, NodeId dst, Addr block_address,
                       std::uint32_t words_per_flit) {
  NOCSIM_CHECK(words_per_flit > 0, "words_per_flit must be positive");
  NOCSIM_CHECK(block.size() % words_per_flit == 0,
               "block size not a whole number of flits");
  Packet pkt;
  pkt.header.src = src;
  pkt.header.dst = dst;
  pkt.header.cls = MsgClass::Reply;
  pkt.header.block_address = block_address;
  pkt.header.cfi = cfi;
  pkt.payload.assign(block.begin(), block.end());
  pkt.words_per_flit = words_per_flit;
  pkt.num_flits = 1 + static_cast<std::uint32_t>(block.size()) / words_per_flit;
  return pkt;
}

Packet make_request(NodeId src, NodeId dst, Addr block_address,
                    std::uint8_t cfi) {
  Packet pkt;
  pkt.header.src = src;
  pkt.header.dst = dst;
  pkt.header.cls = MsgClass::Request;
  pkt.header.block_address = block_address;
  pkt.header.cfi = cfi;
  pkt.num_flits = 1;
  return pkt;
}

}  // namespace nocsim
