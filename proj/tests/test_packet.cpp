#include <numeric>
#include <vector>

#include "doctest.h"
#include "nocsim/packet.hpp"

using namespace nocsim;

namespace {
std::vector<std::uint64_t> block8() {
  std::vector<std::uint64_t> w(8);
  std::iota(w.begin(), w.end(), 100);
  return w;
}
}  // namespace

TEST_CASE("reply packetization: H B0 B1 B2 T with 2 words per data flit") {
  const auto words = block8();
  const Packet pkt = packetize_reply(words, 1, 3, 7, 0x1000, 2);

  CHECK(pkt.num_flits == 5);
  CHECK(pkt.header.cfi == 1);
  CHECK(pkt.header.src == 3);
  CHECK(pkt.header.dst == 7);
  CHECK(pkt.header.cls == MsgClass::Reply);

  CHECK(pkt.kind_of(0) == FlitKind::Head);
  CHECK(pkt.kind_of(1) == FlitKind::Body);
  CHECK(pkt.kind_of(3) == FlitKind::Body);
  CHECK(pkt.kind_of(4) == FlitKind::Tail);

  // Head carries no payload; B1 (seq 2) carries words 2 and 3.
  CHECK(pkt.payload_of(0).empty());
  const auto b1 = pkt.payload_of(2);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0] == words[2]);
  CHECK(b1[1] == words[3]);

  const Flit head = flit_view(pkt, 0);
  CHECK(head.header != nullptr);
  CHECK(head.header->cfi == 1);
  const Flit body = flit_view(pkt, 2);
  CHECK(body.header == nullptr);
  CHECK(body.seq == 2);
}

TEST_CASE("payload layout is independent of the cfi value") {
  const auto words = block8();
  const Packet a = packetize_reply(words, 0, 0, 1, 0, 2);
  const Packet b = packetize_reply(words, 3, 0, 1, 0, 2);
  for (std::uint32_t s = 1; s < 5; ++s) {
    const auto pa = a.payload_of(s);
    const auto pb = b.payload_of(s);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
  }
  CHECK(a.header.cfi == 0);
  CHECK(b.header.cfi == 3);
}

TEST_CASE("concatenating data flits in seq order reconstructs the block") {
  const auto words = block8();
  const Packet pkt = packetize_reply(words, 2, 0, 1, 0, 2);
  std::vector<std::uint64_t> rebuilt;
  for (std::uint32_t s = 1; s < pkt.num_flits; ++s) {
    const auto p = pkt.payload_of(s);
    rebuilt.insert(rebuilt.end(), p.begin(), p.end());
  }
  CHECK(rebuilt == words);
}

TEST_CASE("wrong block size is a contract violation") {
  std::vector<std::uint64_t> five(5, 0);
  CHECK_THROWS_AS(packetize_reply(five, 0, 0, 1, 0, 2), InternalError);
}

TEST_CASE("requests are single HeadTail flits without payload") {
  const Packet req = make_request(4, 9, 0x40, 2);
  CHECK(req.num_flits == 1);
  CHECK(req.kind_of(0) == FlitKind::HeadTail);
  CHECK(req.payload.empty());
  CHECK(req.header.cls == MsgClass::Request);
  CHECK(req.header.cfi == 2);
}
