#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "flowsim/checksum.hpp"

namespace flowsim {

constexpr std::uint8_t kProtocolTcp = 6;
constexpr std::uint8_t kProtocolUdp = 17;

// A 20-byte IPv4 header (IHL = 5, no options) kept in network byte order,
// exactly as it would sit on the wire. Only the ToS byte and the checksum
// are ever rewritten once a header has been built.
class PacketHeader {
 public:
  static constexpr std::size_t kSize = 20;

  PacketHeader() = default;
  explicit PacketHeader(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  static PacketHeader make(std::uint32_t src_addr, std::uint32_t dst_addr,
                           std::uint8_t protocol, std::uint16_t total_length,
                           std::uint8_t tos = 0, std::uint16_t identification = 0,
                           std::uint8_t ttl = 64) {
    PacketHeader h;
    h.bytes_[0] = 0x45;  // version 4, IHL 5
    h.bytes_[1] = tos;
    h.put16(2, total_length);
    h.put16(4, identification);
    h.put16(6, 0x4000);  // DF, fragment offset 0
    h.bytes_[8] = ttl;
    h.bytes_[9] = protocol;
    h.put16(10, 0);
    h.put32(12, src_addr);
    h.put32(16, dst_addr);
    h.put16(10, internet_checksum(h.bytes()));
    return h;
  }

  std::uint8_t version_ihl() const { return bytes_[0]; }
  std::uint8_t tos() const { return bytes_[1]; }
  std::uint16_t total_length() const { return get16(2); }
  std::uint16_t identification() const { return get16(4); }
  std::uint16_t flags_fragment() const { return get16(6); }
  std::uint8_t ttl() const { return bytes_[8]; }
  std::uint8_t protocol() const { return bytes_[9]; }
  std::uint16_t header_checksum() const { return get16(10); }
  std::uint32_t src_addr() const { return get32(12); }
  std::uint32_t dst_addr() const { return get32(16); }

  std::span<const std::uint8_t, kSize> bytes() const { return std::span<const std::uint8_t, kSize>(bytes_); }

  // Structural sanity: IPv4, IHL 5, and a checksum whose one's-complement
  // sum over the full header (checksum field included) folds to 0xFFFF.
  bool well_formed() const {
    return bytes_[0] == 0x45 && fold_checksum(ones_complement_sum(bytes())) == 0xFFFF;
  }

  // Rewrites the ToS byte, patching the checksum incrementally. The
  // mutated word is word 0 (version/IHL << 8 | ToS).
  PacketHeader with_tos(std::uint8_t new_tos) const {
    if (new_tos == tos()) {
      return *this;
    }
    PacketHeader h = *this;
    const std::uint16_t old_word = get16(0);
    const std::uint16_t new_word = static_cast<std::uint16_t>((bytes_[0] << 8) | new_tos);
    h.bytes_[1] = new_tos;
    h.put16(10, incremental_checksum_update(header_checksum(), old_word, new_word));
    return h;
  }

  bool operator==(const PacketHeader& other) const = default;

 private:
  std::uint16_t get16(std::size_t i) const {
    return static_cast<std::uint16_t>(bytes_[i] << 8 | bytes_[i + 1]);
  }
  std::uint32_t get32(std::size_t i) const {
    return static_cast<std::uint32_t>(bytes_[i]) << 24 | static_cast<std::uint32_t>(bytes_[i + 1]) << 16 |
           static_cast<std::uint32_t>(bytes_[i + 2]) << 8 | bytes_[i + 3];
  }
  void put16(std::size_t i, std::uint16_t v) {
    bytes_[i] = static_cast<std::uint8_t>(v >> 8);
    bytes_[i + 1] = static_cast<std::uint8_t>(v & 0xFF);
  }
  void put32(std::size_t i, std::uint32_t v) {
    bytes_[i] = static_cast<std::uint8_t>(v >> 24);
    bytes_[i + 1] = static_cast<std::uint8_t>(v >> 16 & 0xFF);
    bytes_[i + 2] = static_cast<std::uint8_t>(v >> 8 & 0xFF);
    bytes_[i + 3] = static_cast<std::uint8_t>(v & 0xFF);
  }

  std::array<std::uint8_t, kSize> bytes_{};
};

// Functional form used by the splitter hot path.
inline PacketHeader set_tos(const PacketHeader& header, std::uint8_t new_tos) {
  return header.with_tos(new_tos);
}

}  // namespace flowsim
