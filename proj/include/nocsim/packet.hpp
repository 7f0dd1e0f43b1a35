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
#include <span>
#include <vector>

#include "nocsim/types.hpp"

namespace nocsim {

// Which controller at the destination node consumes the packet.
enum class UnitTag : std::uint8_t { Core, Bank, Mc };

struct PacketHeader {
  NodeId src = 0;
  NodeId dst = 0;
  MsgClass cls = MsgClass::Request;
  UnitTag unit = UnitTag::Bank;
  bool writeback = false;  // request carries a victim block notice, no reply
  Addr block_address = 0;
  // Critical flit index carried on the head flit. 2-bit (0..3) with the
  // default 4-data-flit replies.
  std::uint8_t cfi = 0;
};

// A packet owns its payload once; routers and links refer to flits as
// (packet, seq) pairs instead of copying words around.
struct Packet {
  PacketId id = kNoPacket;
  PacketHeader header;
  std::vector<std::uint64_t> payload;  // whole data block; empty for requests
  std::uint32_t words_per_flit = 2;
  std::uint32_t num_flits = 1;

  // Runtime bookkeeping, not wire content.
  Cycle inject_cycle = 0;
  std::uint32_t eject_cursor = 0;

  FlitKind kind_of(std::uint32_t seq) const {
    if (num_flits == 1) return FlitKind::HeadTail;
    if (seq == 0) return FlitKind::Head;
    if (seq + 1 == num_flits) return FlitKind::Tail;
    return FlitKind::Body;
  }

  bool is_reply() const { return header.cls == MsgClass::Reply; }

  // Words carried by flit `seq`. Head flits carry none.
  std::span<const std::uint64_t> payload_of(std::uint32_t seq) const {
    if (seq == 0 || payload.empty()) return {};
    const std::size_t begin = static_cast<std::size_t>(seq - 1) * words_per_flit;
    return std::span<const std::uint64_t>(payload).subspan(begin, words_per_flit);
  }
};

// A flattened view of one flit, for tests and trace output.
struct Flit {
  FlitKind kind = FlitKind::Head;
  PacketId packet_id = kNoPacket;
  std::uint32_t seq = 0;
  std::span<const std::uint64_t> payload;
  const PacketHeader* header = nullptr;  // set on Head/HeadTail only
};

Flit flit_view(const Packet& pkt, std::uint32_t seq);

// Builds the reply packet [H, B0, .., T] for one data block. The head
// carries the header (including the echoed cfi) and no payload; each data
// flit carries exactly words_per_flit words in block order.
Packet packetize_reply(std::span<const std::uint64_t> block, std::uint8_t cfi,
                       NodeId src, NodeId dst, Addr block_address,
                       std::uint32_t words_per_flit);

// One-flit control packet (block request or writeback notice).
Packet make_request(NodeId src, NodeId dst, Addr block_address,
                    std::uint8_t cfi);

}  // namespace nocsim
