#pragma once

#include <cstdint>
#include <optional>

namespace momatch {

// Counter-based generator. Output i of stream `key` is
//   splitmix64_finalize(key + (i + 1) * 0x9E3779B97F4A7C15),
// i.e. SplitMix64 with the state exposed as (key, counter). Streams are
// therefore reproducible bit-for-bit on any platform with IEEE doubles.
// Normal variates use the Box-Muller transform on two 53-bit uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }
  // Uniform on (0, 1): midpoints of the 2^53 grid.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal();
  // +1 or -1, fair.
  int rademacher() { return (next_u64() >> 63) != 0 ? 1 : -1; }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  // Independent child stream derived from this stream's key.
  Rng split(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64_finalize(std::uint64_t z);

// Per-trial seed rule used by the experiment harness.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return master ^ trial;
}

}  // namespace momatch
