#pragma once

#include <cstdint>
#include <stdexcept>

#include "flowsim/five_tuple.hpp"
#include "flowsim/packet_header.hpp"
#include "flowsim/sim_time.hpp"

namespace flowsim {

constexpr std::uint32_t kMinPacketBytes = 20;
constexpr std::uint32_t kDefaultMtu = 1500;

// One simulated datagram travelling source router -> tunnel -> destination
// router. Timestamps are stamped as the packet moves; for every delivered
// packet t_created <= t_splitter_egress <= t_dest_ingress.
struct Packet {
  std::uint64_t flow_id = 0;
  FiveTuple tuple;
  std::uint32_t size_bytes = kMinPacketBytes;  // on-wire length
  std::uint32_t seq_in_flow = 0;
  PacketHeader header;
  SimTime t_created = 0;
  SimTime t_splitter_egress = 0;
  SimTime t_dest_ingress = 0;
  std::int8_t forced_tunnel = -1;  // >= 0: bypasses routing policy (background bypass mode)
};

inline Packet make_packet(std::uint64_t flow_id, const FiveTuple& tuple,
                          std::uint32_t size_bytes, std::uint32_t seq_in_flow,
                          SimTime t_created, std::uint32_t mtu = kDefaultMtu) {
  if (size_bytes < kMinPacketBytes || size_bytes > mtu) {
    throw std::invalid_argument("packet size outside [20, MTU]");
  }
  Packet p;
  p.flow_id = flow_id;
  p.tuple = tuple;
  p.size_bytes = size_bytes;
  p.seq_in_flow = seq_in_flow;
  p.header = PacketHeader::make(tuple.src_addr, tuple.dst_addr, tuple.protocol,
                                static_cast<std::uint16_t>(size_bytes), 0,
                                static_cast<std::uint16_t>(seq_in_flow & 0xFFFF));
  p.t_created = t_created;
  p.t_splitter_egress = t_created;
  p.t_dest_ingress = 0;
  return p;
}

}  // namespace flowsim
