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

#include "nocsim/types.hpp"

namespace nocsim {

// Set-associative cache shape plus the derived tag/set/offset split.
// All sizes must be powers of two.
struct CacheGeometry {
  std::uint64_t size_bytes = 0;
  std::uint32_t associativity = 0;
  std::uint32_t block_bytes = 0;
  std::uint32_t word_bytes = 0;

  std::uint32_t num_sets = 0;
  std::uint32_t offset_bits = 0;
  std::uint32_t set_bits = 0;
  std::uint32_t tag_bits = 0;

  static CacheGeometry make(std::uint64_t size_bytes, std::uint32_t assoc,
                            std::uint32_t block_bytes, std::uint32_t word_bytes);

  std::uint32_t words_per_block() const { return block_bytes / word_bytes; }
};

struct DecomposedAddress {
  std::uint64_t tag = 0;
  std::uint32_t set_index = 0;
  std::uint32_t block_offset = 0;  // bytes within the block
  Addr block_address = 0;          // address with offset bits cleared
};

DecomposedAddress decompose_address(Addr addr, const CacheGeometry& geom);

// Inverse of decompose_address.
Addr recompose_address(const DecomposedAddress& d, const CacheGeometry& geom);

// Index of the data flit that carries the word at block_offset. With the
// default geometry (64B block, 16B flit payload) the result is the 2-bit
// CFI: 0 -> B0, 1 -> B1, 2 -> B2, 3 -> T.
std::uint32_t critical_flit_index(std::uint32_t block_offset,
                                  std::uint32_t flit_payload_bytes);

// critical_flit_index restricted to the 2-bit encoding; requires
// block_bytes / flit_payload_bytes == 4.
std::uint8_t compute_cfi(std::uint32_t block_offset,
                         std::uint32_t flit_payload_bytes,
                         std::uint32_t block_bytes);

// Home L2 bank of a block: block-interleaved across all banks.
NodeId map_bank(Addr block_address, std::uint32_t block_bytes,
                std::uint32_t num_banks);

bool is_power_of_two(std::uint64_t v);

}  // namespace nocsim
