#pragma once

#include <cstdint>

namespace flowsim {

// Simulation clock. Integer nanoseconds so that serialization times of
// 1500 B packets on Gbps-class links are exact, while all reporting is
// done in microseconds.
using SimTime = std::int64_t;

constexpr SimTime kNsPerUs = 1'000;
constexpr SimTime kNsPerMs = 1'000'000;
constexpr SimTime kNsPerSec = 1'000'000'000;

constexpr SimTime from_us(std::int64_t us) { return us * kNsPerUs; }
constexpr SimTime from_ms(std::int64_t ms) { return ms * kNsPerMs; }
constexpr SimTime from_sec(double sec) {
  return static_cast<SimTime>(sec * static_cast<double>(kNsPerSec));
}

constexpr double to_us(SimTime t) { return static_cast<double>(t) / 1e3; }
constexpr double to_sec(SimTime t) { return static_cast<double>(t) / 1e9; }

// Transmission time of `bytes` on a link of `capacity_bps`, truncated to
// whole nanoseconds. Exact for the common (1500 B, 1 Gbps) case.
constexpr SimTime serialization_time(std::int64_t bytes, std::int64_t capacity_bps) {
  return bytes * 8 * kNsPerSec / capacity_bps;
}

}  // namespace flowsim
