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

#include "nocsim/address.hpp"

#include <bit>

namespace nocsim {

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

CacheGeometry CacheGeometry::make(std::uint64_t size_bytes, std::uint32_t assoc,
                                  std::uint32_t block_bytes,
                                  std::uint32_t word_bytes) {
  if (!is_power_of_two(size_bytes) || !is_power_of_two(assoc) ||
      !is_power_of_two(block_bytes) || !is_power_of_two(word_bytes)) {
    throw ConfigError("cache geometry fields must be powers of two");
  }
  if (word_bytes > block_bytes) {
    throw ConfigError("word size exceeds block size");
  }
  const std::uint64_t per_way = size_bytes / assoc;
  if (per_way % block_bytes != 0 || per_way / block_bytes == 0) {
    throw ConfigError("cache size not divisible into sets");
  }
  CacheGeometry g;
  g.size_bytes = size_bytes;
  g.associativity = assoc;
  g.block_bytes = block_bytes;
  g.word_bytes = word_bytes;
  g.num_sets = static_cast<std::uint32_t>(per_way / block_bytes);
  g.offset_bits = static_cast<std::uint32_t>(std::countr_zero(std::uint64_t{block_bytes}));
  g.set_bits = static_cast<std::uint32_t>(std::countr_zero(std::uint64_t{g.num_sets}));
  g.tag_bits = 64 - g.offset_bits - g.set_bits;
  return g;
}

DecomposedAddress decompose_address(Addr addr, const CacheGeometry& geom) {
  DecomposedAddress d;
  d.block_offset = static_cast<std::uint32_t>(addr & (geom.block_bytes - 1));
  d.set_index =
      static_cast<std::uint32_t>((addr >> geom.offset_bits) & (geom.num_sets - 1));
  d.tag = addr >> (geom.offset_bits + geom.set_bits);
  d.block_address = addr & ~static_cast<Addr>(geom.block_bytes - 1);
  return d;
}

Addr recompose_address(const DecomposedAddress& d, const CacheGeometry& geom) {
  return (d.tag << (geom.offset_bits + geom.set_bits)) |
         (static_cast<Addr>(d.set_index) << geom.offset_bits) | d.block_offset;
}

std::uint32_t critical_flit_index(std::uint32_t block_offset,
                                  std::uint32_t flit_payload_bytes) {
  NOCSIM_CHECK(flit_payload_bytes > 0, "flit payload must be nonzero");
  return block_offset / flit_payload_bytes;
}

std::uint8_t compute_cfi(std::uint32_t block_offset,
                         std::uint32_t flit_payload_bytes,
                         std::uint32_t block_bytes) {
  NOCSIM_CHECK(block_offset < block_bytes, "offset outside block");
  NOCSIM_CHECK(block_bytes / flit_payload_bytes == 4,
               "2-bit CFI needs exactly 4 data flits per block");
  return static_cast<std::uint8_t>(block_offset / flit_payload_bytes);
}

NodeId map_bank(Addr block_address, std::uint32_t block_bytes,
                std::uint32_t num_banks) {
  return static_cast<NodeId>((block_address / block_bytes) % num_banks);
}

}  // namespace nocsim
