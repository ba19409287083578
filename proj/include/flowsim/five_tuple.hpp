#pragma once

#include <cstdint>
#include <functional>

namespace flowsim {

// Unidirectional flow identity. A->B and B->A are distinct flows.
struct FiveTuple {
  std::uint32_t src_addr = 0;
  std::uint32_t dst_addr = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t protocol = 0;

  bool operator==(const FiveTuple&) const = default;
};

// FNV-1a over the 13 identity bytes. Pinned here (rather than delegating
// to std::hash) so per-flow tunnel selection is stable across platforms.
constexpr std::uint64_t hash_tuple(const FiveTuple& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  mix(t.src_addr, 4);
  mix(t.dst_addr, 4);
  mix(t.src_port, 2);
  mix(t.dst_port, 2);
  mix(t.protocol, 1);
  return h;
}

struct FiveTupleHash {
  std::size_t operator()(const FiveTuple& t) const { return static_cast<std::size_t>(hash_tuple(t)); }
};

}  // namespace flowsim
