#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flowsim/splitter.hpp"

namespace flowsim {

struct BenchResult {
  std::uint64_t calls = 0;
  std::uint64_t flows = 0;
  double mean_ns = 0.0;
  double p99_ns = 0.0;
  std::uint64_t long_classified = 0;  // keeps the measured loop observable
};

// Wall-clock cost of process_packet over synthetic headers cycling
// through `flow_cardinality` distinct flows. Calls are timed in chunks so
// clock reads stay off the hot path; the p99 is over per-chunk means.
inline BenchResult bench_splitter(std::uint64_t n_packets, std::uint64_t flow_cardinality,
                                  std::uint64_t threshold = 40) {
  if (n_packets == 0) {
    throw std::invalid_argument("bench needs at least one packet");
  }
  if (flow_cardinality == 0) {
    throw std::invalid_argument("bench needs at least one flow");
  }

  std::vector<PacketHeader> headers;
  std::vector<std::uint16_t> ports;
  const std::uint64_t distinct = std::min<std::uint64_t>(flow_cardinality, 1u << 20);
  headers.reserve(distinct);
  ports.reserve(distinct);
  for (std::uint64_t i = 0; i < flow_cardinality; ++i) {
    headers.push_back(PacketHeader::make(0x0a000000 + static_cast<std::uint32_t>(i / 60'000),
                                         0x0a800001, kProtocolTcp, 1500, 0,
                                         static_cast<std::uint16_t>(i)));
    ports.push_back(static_cast<std::uint16_t>(1024 + i % 60'000));
  }

  FlowTable table(threshold);
  table.reserve(flow_cardinality);

  const std::uint64_t chunk = 1024;
  std::vector<double> chunk_means;
  chunk_means.reserve(n_packets / chunk + 1);

  BenchResult res;
  res.calls = n_packets;
  res.flows = flow_cardinality;

  std::uint64_t idx = 0;
  double total_ns = 0.0;
  for (std::uint64_t done = 0; done < n_packets;) {
    const std::uint64_t batch = std::min(chunk, n_packets - done);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < batch; ++i) {
      const SplitResult r = process_packet(table, headers[idx], ports[idx], 443,
                                           static_cast<SimTime>(done + i));
      res.long_classified += r.flow_class == FlowClass::Long ? 1 : 0;
      if (++idx == flow_cardinality) {
        idx = 0;
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    total_ns += ns;
    chunk_means.push_back(ns / static_cast<double>(batch));
    done += batch;
  }

  res.mean_ns = total_ns / static_cast<double>(n_packets);
  std::sort(chunk_means.begin(), chunk_means.end());
  const std::size_t rank = chunk_means.size() * 99 / 100;
  res.p99_ns = chunk_means[std::min(rank, chunk_means.size() - 1)];
  return res;
}

}  // namespace flowsim
