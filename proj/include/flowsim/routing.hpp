#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "flowsim/packet.hpp"
#include "flowsim/splitter.hpp"

namespace flowsim {

// Tunnel selection at the source border router. SplitterToS is the
// proposal (mark-driven); the ECMP variants are baselines.
enum class RoutingPolicy : std::uint8_t {
  SplitterToS,    // short mark -> tunnel 0, long mark -> tunnel 1
  EcmpPerPacket,  // strict round-robin over routed packets
  EcmpPerFlow,    // 5-tuple hash mod 2
};

inline std::string policy_name(RoutingPolicy p) {
  switch (p) {
    case RoutingPolicy::SplitterToS: return "splitter";
    case RoutingPolicy::EcmpPerPacket: return "ecmp_packet";
    case RoutingPolicy::EcmpPerFlow: return "ecmp_flow";
  }
  throw std::logic_error("unknown policy");
}

inline RoutingPolicy policy_from_name(const std::string& name) {
  if (name == "splitter") return RoutingPolicy::SplitterToS;
  if (name == "ecmp_packet") return RoutingPolicy::EcmpPerPacket;
  if (name == "ecmp_flow") return RoutingPolicy::EcmpPerFlow;
  throw std::invalid_argument("unknown routing policy: " + name);
}

struct RouterState {
  std::uint32_t rr_next = 0;
  std::uint64_t unknown_tos_count = 0;
};

inline int route(RoutingPolicy policy, const Packet& packet, RouterState& state,
                 const TosMarks& marks = {}) {
  switch (policy) {
    case RoutingPolicy::SplitterToS: {
      const std::uint8_t tos = packet.header.tos();
      if (tos == marks.long_mark) {
        return 1;
      }
      if (tos != marks.short_mark) {
        ++state.unknown_tos_count;  // unexpected mark: fail toward the short tunnel
      }
      return 0;
    }
    case RoutingPolicy::EcmpPerPacket: {
      const int idx = static_cast<int>(state.rr_next);
      state.rr_next ^= 1u;
      return idx;
    }
    case RoutingPolicy::EcmpPerFlow:
      return static_cast<int>(hash_tuple(packet.tuple) & 1u);
  }
  throw std::logic_error("unknown policy");
}

}  // namespace flowsim
