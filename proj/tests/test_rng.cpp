#include <vector>

#include "doctest.h"
#include "nocsim/rng.hpp"

using namespace nocsim;

TEST_CASE("bound 1 always yields 0") {
  RngStream rng(42, "test");
  for (int i = 0; i < 100; ++i) CHECK(rng.next_below(1) == 0);
}

TEST_CASE("bound 0 is a contract violation") {
  RngStream rng(42, "test");
  CHECK_THROWS_AS(rng.next_below(0), InternalError);
}

TEST_CASE("same seed and stream id reproduce the sequence") {
  RngStream a(12345, "router/0");
  RngStream b(12345, "router/0");
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream ids decorrelate") {
  RngStream a(12345, "router/0");
  RngStream b(12345, "router/1");
  int same = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++same;
  }
  CHECK(same == 0);
}

TEST_CASE("next_below(8) is uniform within 2% over 80k draws") {
  RngStream rng(7, "uniformity");
  std::vector<std::uint64_t> counts(8, 0);
  const int n = 80000;
  for (int i = 0; i < n; ++i) counts[rng.next_below(8)] += 1;
  for (std::uint64_t c : counts) {
    const double freq = static_cast<double>(c) / n;
    CHECK(freq > 0.125 - 0.02);
    CHECK(freq < 0.125 + 0.02);
  }
}

TEST_CASE("next_double stays in [0, 1)") {
  RngStream rng(99, "doubles");
  for (int i = 0; i < 10000; ++i) {
    const double d = rng.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
  }
}
