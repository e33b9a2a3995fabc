#include "ifsq/index_codec.hpp"

#include <stdexcept>
#include <string>

namespace ifsq {

TokenIndex encode_index(std::span<const std::uint32_t> digits, const LevelSpec& levels) {
  if (digits.size() != levels.dims()) {
    throw std::invalid_argument("dimension mismatch between digits and levels");
  }
  // Horner form; LevelSpec guarantees the product fits, so no step overflows.
  std::uint64_t index = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] >= levels[j]) {
      throw std::out_of_range("digit " + std::to_string(digits[j]) + " out of range at dimension " +
                              std::to_string(j));
    }
    index = index * levels[j] + digits[j];
  }
  return TokenIndex{index};
}

Digits decode_index(TokenIndex index, const LevelSpec& levels) {
  if (index.value >= levels.codebook_size()) {
    throw std::out_of_range("token index " + std::to_string(index.value) +
                            " out of range for codebook of size " +
                            std::to_string(levels.codebook_size()));
  }
  Digits q(levels.dims());
  std::uint64_t rest = index.value;
  for (std::size_t j = levels.dims(); j-- > 0;) {
    q[j] = static_cast<std::uint32_t>(rest % levels[j]);
    rest /= levels[j];
  }
  return q;
}

}  // namespace ifsq
