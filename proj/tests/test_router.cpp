#include <vector>

#include "doctest.h"
#include "nocsim/packet.hpp"
#include "nocsim/router.hpp"

using namespace nocsim;

TEST_CASE("xy routing resolves x before y") {
  CHECK(route_xy({1, 1}, {3, 1}, 8) == kPortEast);
  CHECK(route_xy({3, 1}, {1, 1}, 8) == kPortWest);
  CHECK(route_xy({3, 2}, {3, 0}, 8) == kPortNorth);
  CHECK(route_xy({3, 0}, {3, 2}, 8) == kPortSouth);
  CHECK(route_xy({2, 2}, {2, 2}, 8) == kPortLocal);
  // x is corrected first even when y also differs
  CHECK(route_xy({0, 0}, {5, 5}, 8) == kPortEast);
}

TEST_CASE("out-of-mesh coordinates are a contract violation") {
  CHECK_THROWS_AS(route_xy({0, 0}, {8, 0}, 8), InternalError);
  CHECK_THROWS_AS(route_xy({-1, 0}, {0, 0}, 8), InternalError);
}

TEST_CASE("round robin: singleton candidate wins") {
  int ptr = 7;
  std::vector<SwitchCandidate> c = {{2, 1, false, 0}};
  CHECK(arbitrate_rr(c, &ptr, 3) == 0);
  // pointer moved just past the winner's slot (2*3+1+1 = 8)
  CHECK(ptr == 8);
}

TEST_CASE("round robin: pointer picks the candidate at or after it") {
  // A at slot (0,0)=0, B at slot (1,0)=3; pointer at B's slot.
  std::vector<SwitchCandidate> c = {{0, 0, false, 0}, {1, 0, false, 0}};
  int ptr = 3;
  CHECK(arbitrate_rr(c, &ptr, 3) == 1);
  CHECK(ptr == 4);
}

TEST_CASE("round robin: two contenders alternate exactly over 100 rounds") {
  std::vector<SwitchCandidate> c = {{0, 0, false, 0}, {3, 2, false, 0}};
  int ptr = 0;
  int wins[2] = {0, 0};
  std::size_t prev = 42;
  for (int i = 0; i < 100; ++i) {
    const std::size_t w = arbitrate_rr(c, &ptr, 3);
    wins[w] += 1;
    CHECK(w != prev);
    prev = w;
  }
  CHECK(wins[0] == 50);
  CHECK(wins[1] == 50);
}

TEST_CASE("empty candidate set is a contract violation") {
  int ptr = 0;
  std::vector<SwitchCandidate> none;
  CHECK_THROWS_AS(arbitrate_rr(none, &ptr, 3), InternalError);
  CHECK_THROWS_AS(arbitrate_cfi(none, &ptr, 3), InternalError);
}

TEST_CASE("cfi arbitration: lower counter wins within the critical class") {
  std::vector<SwitchCandidate> c = {{0, 0, true, 0}, {1, 0, true, 2}};
  int ptr = 3;  // round robin alone would favor the second
  CHECK(arbitrate_cfi(c, &ptr, 3) == 0);
}

TEST_CASE("cfi arbitration: counter ties break round-robin") {
  std::vector<SwitchCandidate> c = {{0, 0, true, 1}, {1, 0, true, 1}};
  int ptr = 3;  // at the second candidate's slot
  CHECK(arbitrate_cfi(c, &ptr, 3) == 1);
  ptr = 0;
  CHECK(arbitrate_cfi(c, &ptr, 3) == 0);
}

TEST_CASE("cfi arbitration: post-critical flits yield to the critical class") {
  // A still before its critical flit (counter 3), B already past it.
  std::vector<SwitchCandidate> c = {{0, 0, true, 3}, {1, 0, false, 0}};
  int ptr = 3;
  CHECK(arbitrate_cfi(c, &ptr, 3) == 0);
}

TEST_CASE("cfi arbitration degenerates to round robin without criticals") {
  std::vector<SwitchCandidate> c = {{0, 1, false, 2}, {2, 0, false, 0},
                                    {4, 2, false, 1}};
  int p1 = 5, p2 = 5;
  for (int i = 0; i < 50; ++i) {
    auto a = arbitrate_rr(c, &p1, 3);
    auto b = arbitrate_cfi(c, &p2, 3);
    CHECK(a == b);
    CHECK(p1 == p2);
  }
}

namespace {

Packet reply_with_cfi(std::uint8_t cfi) {
  std::vector<std::uint64_t> words(8, 0);
  Packet p = packetize_reply(words, cfi, 0, 1, 0, 2);
  p.id = 77;
  return p;
}

VcState occupied_by(const Packet& p) {
  VcState vc;
  vc.occupant = p.id;
  vc.is_reply = p.is_reply();
  return vc;
}

}  // namespace

TEST_CASE("counter walk for a cfi=2 reply: 2,1,0 then critical passes") {
  const Packet p = reply_with_cfi(2);
  VcState vc = occupied_by(p);

  update_cfi_counter(vc, p, 0);  // head departs
  CHECK(vc.cfi_counter == 2);
  CHECK_FALSE(vc.critical_passed);

  update_cfi_counter(vc, p, 1);  // B0
  CHECK(vc.cfi_counter == 1);
  update_cfi_counter(vc, p, 2);  // B1
  CHECK(vc.cfi_counter == 0);
  CHECK_FALSE(vc.critical_passed);

  update_cfi_counter(vc, p, 3);  // B2 is the critical flit
  CHECK(vc.cfi_counter == 0);
  CHECK(vc.critical_passed);

  update_cfi_counter(vc, p, 4);  // tail: occupancy torn down
  CHECK(vc.occupant == kNoPacket);
  CHECK(vc.cfi_counter == 0);
  CHECK_FALSE(vc.critical_passed);
}

TEST_CASE("counter walk for a cfi=0 reply: B0 is already critical") {
  const Packet p = reply_with_cfi(0);
  VcState vc = occupied_by(p);
  update_cfi_counter(vc, p, 0);
  CHECK(vc.cfi_counter == 0);
  CHECK_FALSE(vc.critical_passed);
  update_cfi_counter(vc, p, 1);
  CHECK(vc.critical_passed);
  CHECK(vc.cfi_counter == 0);
}

TEST_CASE("tail departure clears the occupant even when critical is the tail") {
  const Packet p = reply_with_cfi(3);
  VcState vc = occupied_by(p);
  update_cfi_counter(vc, p, 0);
  for (std::uint32_t s = 1; s <= 3; ++s) update_cfi_counter(vc, p, s);
  CHECK(vc.cfi_counter == 0);
  CHECK_FALSE(vc.critical_passed);
  update_cfi_counter(vc, p, 4);  // tail carries the critical word
  CHECK(vc.occupant == kNoPacket);
}
