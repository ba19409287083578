#pragma once

#include <cstdint>
#include <span>

namespace flowsim {

// One's-complement 16-bit fold of a 32-bit accumulator (RFC 1071).
constexpr std::uint16_t fold_checksum(std::uint32_t sum) {
  while (sum >> 16) {
    sum = (sum & 0xFFFF) + (sum >> 16);
  }
  return static_cast<std::uint16_t>(sum);
}

// Sums big-endian 16-bit words. `len` must be even.
constexpr std::uint32_t ones_complement_sum(std::span<const std::uint8_t> data) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < data.size(); i += 2) {
    sum += static_cast<std::uint32_t>(data[i]) << 8 | data[i + 1];
  }
  return sum;
}

// Internet checksum over `data` with the checksum field assumed zeroed.
constexpr std::uint16_t internet_checksum(std::span<const std::uint8_t> data) {
  return static_cast<std::uint16_t>(~fold_checksum(ones_complement_sum(data)));
}

// Incremental checksum update after rewriting one 16-bit header word
// (RFC 1624, eqn. 3): HC' = ~(~HC + ~m + m').
constexpr std::uint16_t incremental_checksum_update(std::uint16_t old_checksum,
                                                    std::uint16_t old_word,
                                                    std::uint16_t new_word) {
  std::uint32_t sum = static_cast<std::uint16_t>(~old_checksum);
  sum += static_cast<std::uint16_t>(~old_word);
  sum += new_word;
  return static_cast<std::uint16_t>(~fold_checksum(sum));
}

}  // namespace flowsim
