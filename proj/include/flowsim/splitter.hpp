#pragma once

#include <cstdint>

#include "flowsim/flow_table.hpp"
#include "flowsim/packet_header.hpp"

namespace flowsim {

// ToS code points driving tunnel selection. Values are arbitrary distinct
// DSCP-compatible marks; both are configurable.
struct TosMarks {
  std::uint8_t short_mark = 0x00;
  std::uint8_t long_mark = 0x08;
};

struct SplitResult {
  FlowClass flow_class = FlowClass::Short;
  PacketHeader header;
  bool malformed = false;
};

// Classifies one packet and re-marks its ToS byte.
//
// TCP packets are counted per 5-tuple; once a flow's count reaches the
// table threshold (increment first, then compare with >=) its packets are
// marked long. Non-TCP packets pass through byte-identical and are never
// tabled. Malformed headers fail open: reported Short, header untouched,
// `malformed` set so the caller can count the anomaly.
//
// Transport ports live outside the 20-byte IPv4 header, so the caller
// supplies them; for TCP they are the first four bytes after the header
// and are sent in cleartext even when the payload is encrypted.
inline SplitResult process_packet(FlowTable& table, const PacketHeader& header,
                                  std::uint16_t src_port, std::uint16_t dst_port,
                                  SimTime now, const TosMarks& marks = {}) {
  if (!header.well_formed()) {
    return {FlowClass::Short, header, true};
  }
  if (header.protocol() != kProtocolTcp) {
    return {FlowClass::Short, header, false};
  }
  const FiveTuple tuple{header.src_addr(), header.dst_addr(), src_port, dst_port,
                        header.protocol()};
  const std::uint64_t count = table.observe(tuple, now);
  if (count >= table.threshold()) {
    return {FlowClass::Long, header.with_tos(marks.long_mark), false};
  }
  return {FlowClass::Short, header.with_tos(marks.short_mark), false};
}

}  // namespace flowsim
