#include "doctest.h"
#include "nocsim/address.hpp"
#include "nocsim/rng.hpp"

using namespace nocsim;

namespace {
CacheGeometry l1_default() { return CacheGeometry::make(32 * 1024, 8, 64, 8); }
}  // namespace

TEST_CASE("default L1 geometry has 64 sets and 6/6 offset/set bits") {
  const CacheGeometry g = l1_default();
  CHECK(g.num_sets == 64);
  CHECK(g.offset_bits == 6);
  CHECK(g.set_bits == 6);
  CHECK(g.tag_bits == 52);
  CHECK(g.words_per_block() == 8);
}

TEST_CASE("non power-of-two geometry is rejected") {
  CHECK_THROWS_AS(CacheGeometry::make(3000, 8, 64, 8), ConfigError);
  CHECK_THROWS_AS(CacheGeometry::make(32 * 1024, 3, 64, 8), ConfigError);
}

TEST_CASE("decompose_address matches the bit-slice oracle") {
  const CacheGeometry g = l1_default();

  // 0x1040: offset = 0x1040 & 63 = 0, set = (0x1040 >> 6) & 63 = 1,
  // tag = 0x1040 >> 12 = 1.
  const DecomposedAddress d = decompose_address(0x1040, g);
  CHECK(d.block_offset == 0);
  CHECK(d.set_index == 1);
  CHECK(d.tag == 1);
  CHECK(d.block_address == 0x1040);

  const DecomposedAddress z = decompose_address(0x0, g);
  CHECK(z.block_offset == 0);
  CHECK(z.set_index == 0);
  CHECK(z.tag == 0);
  CHECK(z.block_address == 0);
}

TEST_CASE("recompose(decompose(a)) == a for random addresses") {
  const CacheGeometry g = l1_default();
  RngStream rng(123, "addr");
  for (int i = 0; i < 10000; ++i) {
    const Addr a = rng.next_u64() >> 4;  // keep clear of the sign-ish top bits
    const DecomposedAddress d = decompose_address(a, g);
    CHECK(recompose_address(d, g) == a);
    CHECK((d.block_address & 63) == 0);
    CHECK(d.block_address == a - d.block_offset);
  }
}

TEST_CASE("compute_cfi equals floor(offset/16) for the whole block") {
  for (std::uint32_t offset = 0; offset < 64; ++offset) {
    CHECK(compute_cfi(offset, 16, 64) == offset / 16);
  }
  // The examples the flit layout pins down: word 3 lives at offset 24 in B1,
  // offset 0 in B0, offset 63 in the tail.
  CHECK(compute_cfi(24, 16, 64) == 1);
  CHECK(compute_cfi(0, 16, 64) == 0);
  CHECK(compute_cfi(63, 16, 64) == 3);
}

TEST_CASE("compute_cfi rejects non-2-bit encodings") {
  CHECK_THROWS_AS(compute_cfi(0, 8, 64), InternalError);   // 8 data flits
  CHECK_THROWS_AS(compute_cfi(64, 16, 64), InternalError); // offset outside
}

TEST_CASE("map_bank interleaves blocks across banks") {
  CHECK(map_bank(0, 64, 64) == 0);
  CHECK(map_bank(64, 64, 64) == 1);
  CHECK(map_bank(64 * 64, 64, 64) == 0);
  CHECK(map_bank(65 * 64, 64, 64) == 1);
}
