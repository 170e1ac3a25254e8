#pragma once

#include <cstdint>
#include <initializer_list>

namespace qcrl {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Hashes a tuple of integers into a stream key.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

/// Counter-based generator: the k-th output of a stream is a pure function of
/// (key, k). Streams for different keys are independent for practical purposes
/// and identical across platforms and thread schedules.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (pairs are cached).
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qcrl
