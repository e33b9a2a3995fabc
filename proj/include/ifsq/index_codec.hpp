#pragma once

#include <compare>
#include <cstdint>
#include <span>

#include "ifsq/quantizer.hpp"

namespace ifsq {

/// Flat token id of a digit vector. Always < codebook_size of its LevelSpec.
struct TokenIndex {
  std::uint64_t value = 0;
  friend auto operator<=>(const TokenIndex&, const TokenIndex&) = default;
};

/// Mixed-radix encoding, first dimension most significant:
///   I = sum_j q_j * prod_{k > j} L_k
/// With uniform L this is the base-L expansion sum_j q_j * L^(d - j).
/// Throws std::out_of_range for a digit >= L_j.
TokenIndex encode_index(std::span<const std::uint32_t> digits, const LevelSpec& levels);

/// Inverse of encode_index. Throws std::out_of_range for I >= codebook_size.
Digits decode_index(TokenIndex index, const LevelSpec& levels);

}  // namespace ifsq
