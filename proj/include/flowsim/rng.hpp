#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace flowsim {

// splitmix64; used to derive independent child seeds from one master seed
// so that workload streams stay identical across policy pairs.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled inverse-CDF draws. The standard
// distributions are implementation-defined, so sampling is pinned here to
// keep seeded runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // exponential inter-arrival gap, mean 1/rate
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // index sampled proportionally to `weights` (need not be normalized)
  std::size_t weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      total += w;
    }
    double u = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) {
        return i;
      }
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace flowsim
